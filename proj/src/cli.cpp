#include "ringbind/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "ringbind/count_dp.hpp"
#include "ringbind/energy.hpp"
#include "ringbind/ensemble.hpp"
#include "ringbind/errors.hpp"
#include "ringbind/fit.hpp"
#include "ringbind/io.hpp"
#include "ringbind/lattice.hpp"
#include "ringbind/rng.hpp"
#include "ringbind/sweep.hpp"

namespace ringbind::cli {

namespace {

enum class OutputFormat { csv, json };

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown format \"" + name + "\", expected csv or json");
}

struct ResolvedCommon {
  LatticeSpec spec;
  ReducedParams params;
  double n0;
  Engine engine;
  OutputFormat format;
};

// Flag precedence for n0: command line beats the parameter file beats the
// built-in default of 25.
ResolvedCommon resolve(const CommonOptions& opt) {
  ResolvedCommon r{LatticeSpec(opt.ring_len), ReducedParams::tric_default(), 25.0,
                   Engine::enumeration, OutputFormat::csv};
  if (!opt.params_path.empty()) {
    const ParamFileContents file = load_params(opt.params_path);
    r.params = file.params;
    r.n0 = file.n0;
  }
  if (opt.n0) r.n0 = *opt.n0;
  if (!std::isfinite(r.n0) || r.n0 <= 0) throw ConfigError("n0 must be positive and finite");
  r.engine = opt.engine_name.empty() ? default_engine(r.spec) : engine_from_name(opt.engine_name);
  r.format = format_from_name(opt.format_name);
  return r;
}

void emit(const CommonOptions& opt, const std::string& payload, std::ostream& out) {
  if (opt.out_path.empty())
    out << payload;
  else
    write_text_file(opt.out_path, payload);
}

template <typename Fn>
int run_guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const BathError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateEnsembleError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

// Row m of Pascal's triangle; exact in 64-bit integers through m = 64.
std::vector<double> binomial_row(int m) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(m) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= m; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  return {row.begin(), row.end()};
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

int cmd_dist(const DistOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const ResolvedCommon r = resolve(opt.common);
    const Bath bath = bath_from_conc(opt.atp_uM, r.n0, r.spec);
    SweepResult result;
    result.ring_len = r.spec.ring_len();
    result.n0 = r.n0;
    result.engine = r.engine;
    result.rows.push_back(
        SweepRow{bath.atp_uM, bath.n_total, compute_distribution(r.engine, r.params, bath, r.spec)});
    emit(opt.common, r.format == OutputFormat::csv ? sweep_to_csv(result) : sweep_to_json(result),
         out);
    return 0;
  });
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const ResolvedCommon r = resolve(opt.common);
    const std::vector<double> grid = opt.atp_list_uM.empty()
                                         ? log_spaced(opt.atp_min_uM, opt.atp_max_uM, opt.points)
                                         : opt.atp_list_uM;
    const SweepResult result = sweep(r.params, grid, r.n0, r.spec, r.engine);
    emit(opt.common, r.format == OutputFormat::csv ? sweep_to_csv(result) : sweep_to_json(result),
         out);
    return 0;
  });
}

int cmd_crossover(const CrossoverOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const ResolvedCommon r = resolve(opt.common);
    const CrossoverResult res = find_mode_crossover(r.params, r.n0, r.spec, opt.lo_uM, opt.hi_uM,
                                                    r.engine, opt.resolution_uM);
    std::string payload;
    if (r.format == OutputFormat::csv) {
      payload = "crossover_uM,mode_low,mode_high,bracket_lo_uM,bracket_hi_uM\n" +
                format_double(res.atp_uM) + "," + std::to_string(res.mode_low) + "," +
                std::to_string(res.mode_high) + "," + format_double(res.lo_uM) + "," +
                format_double(res.hi_uM) + "\n";
    } else {
      nlohmann::ordered_json doc;
      doc["crossover_uM"] = res.atp_uM;
      doc["mode_low"] = res.mode_low;
      doc["mode_high"] = res.mode_high;
      doc["bracket_lo_uM"] = res.lo_uM;
      doc["bracket_hi_uM"] = res.hi_uM;
      payload = doc.dump(2) + "\n";
    }
    emit(opt.common, payload, out);
    return 0;
  });
}

int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const LatticeSpec spec(opt.common.ring_len);
    const OutputFormat format = format_from_name(opt.common.format_name);
    if (opt.data_path.empty()) throw ConfigError("fit needs a dataset file (--data)");
    const Dataset data = load_dataset(opt.data_path);
    FitConfig config;
    config.restarts = opt.restarts;
    config.max_iters = opt.max_iters;
    config.polish_rounds = opt.polish_rounds;
    config.seed = opt.seed;
    config.engine = opt.common.engine_name.empty() ? Engine::transfer_dp
                                                   : engine_from_name(opt.common.engine_name);
    const FitResult result = fit(data, spec, config);
    emit(opt.common,
         format == OutputFormat::json ? fit_report_json(result) : fit_report_table(result), out);
    return 0;
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const ResolvedCommon r = resolve(opt.common);
    if (opt.draws < 1) throw ConfigError("draws must be at least 1");
    const int m = r.spec.total_sites();
    const bool enumerable = m <= kMaxEnumerationSites;
    const std::vector<double> choose = binomial_row(m);
    std::ostringstream report;
    int failures = 0;

    const auto record = [&report, &failures](bool ok, const std::string& text) {
      report << (ok ? "[ok]   " : "[FAIL] ") << text << "\n";
      if (!ok) ++failures;
    };

    ReducedParams flat;
    flat.alpha_hat = {0, 0, 0};
    flat.beta_hat = {0, 0, 0};
    flat.gamma0 = 0;

    {
      const CountResolvedWeights w = count_resolved_weights(flat, r.spec);
      double worst = 0;
      for (int n = 0; n <= m; ++n) {
        const double ratio = std::exp(w.log_omega[static_cast<std::size_t>(n)]) /
                             choose[static_cast<std::size_t>(n)];
        worst = std::max(worst, std::abs(ratio - 1));
      }
      record(worst <= 1e-12, "transfer weights reproduce binomial coefficients: max relative "
                             "deviation " + short_num(worst) + " (limit 1e-12)");
    }

    if (enumerable) {
      const Bath bath = bath_from_conc(5.0, m + 9.0, r.spec);
      const OccupancyDistribution dist = occupancy_distribution(flat, bath, r.spec);
      const double scale = std::pow(2.0, -m);
      double worst = 0;
      for (int n = 0; n <= m; ++n)
        worst = std::max(worst, std::abs(dist.p_n[static_cast<std::size_t>(n)] -
                                         choose[static_cast<std::size_t>(n)] * scale));
      record(worst <= 1e-12, "enumeration reproduces the binomial distribution: max absolute "
                             "deviation " + short_num(worst) + " (limit 1e-12)");
    } else {
      report << "[skip] enumeration checks need ring length <= " << kMaxEnumerationSites / 2
             << "\n";
    }

    if (enumerable) {
      SplitMix64 gen(opt.seed);
      double worst_rel = 0;
      double worst_norm = 0;
      for (int d = 0; d < opt.draws; ++d) {
        ReducedParams p;
        for (int i = 0; i < 3; ++i) p.alpha_hat[static_cast<std::size_t>(i)] = gen.uniform_in(-8, 8);
        for (int i = 0; i < 3; ++i) p.beta_hat[static_cast<std::size_t>(i)] = gen.uniform_in(-8, 8);
        p.gamma0 = gen.uniform_in(-120, -0.5);
        const Bath bath = bath_from_conc(5.0, m + gen.uniform_in(0.5, 200.0), r.spec);
        const OccupancyDistribution de = occupancy_distribution(p, bath, r.spec);
        const OccupancyDistribution dd = distribution_via_dp(p, bath, r.spec);
        double norm_e = 0, norm_d = 0;
        for (int n = 0; n <= m; ++n) {
          const double pe = de.p_n[static_cast<std::size_t>(n)];
          const double pd = dd.p_n[static_cast<std::size_t>(n)];
          norm_e += pe;
          norm_d += pd;
          const double denom = std::max(std::max(pe, pd), 1e-250);
          worst_rel = std::max(worst_rel, std::abs(pe - pd) / denom);
        }
        worst_norm = std::max({worst_norm, std::abs(norm_e - 1), std::abs(norm_d - 1)});
      }
      record(worst_rel <= 1e-10,
             "enumeration and transfer engines agree on " + std::to_string(opt.draws) +
                 " random parameter draws: max relative deviation " + short_num(worst_rel) +
                 " (limit 1e-10)");
      record(worst_norm <= 1e-12, "distributions are normalized: max |sum - 1| = " +
                                      short_num(worst_norm) + " (limit 1e-12)");
    }

    {
      const auto checks = cooperativity_checks(r.params);
      std::size_t holding = 0;
      std::string failed;
      for (const CooperativityCheck& check : checks) {
        if (check.holds) {
          ++holding;
        } else {
          if (!failed.empty()) failed += "; ";
          failed += check.label;
        }
      }
      if (holding == checks.size()) {
        report << "[ok]   cooperativity orderings hold for these parameters (" << holding << " of "
               << checks.size() << ")\n";
      } else {
        report << "[warn] cooperativity orderings violated for these parameters (" << holding
               << " of " << checks.size() << " hold): " << failed << "\n";
      }
    }

    report << (failures == 0 ? "verification passed\n"
                             : "verification failed: " + std::to_string(failures) + " check(s)\n");
    emit(opt.common, report.str(), out);
    return failures == 0 ? 0 : 3;
  });
}

}  // namespace ringbind::cli
