#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "ringbind/engine.hpp"
#include "ringbind/io.hpp"
#include "ringbind/sweep.hpp"

using namespace ringbind;
using doctest::Approx;

namespace {

double reparse(const std::string& text) {
  double value = 0;
  std::from_chars(text.data(), text.data() + text.size(), value);
  return value;
}

}  // namespace

TEST_CASE("double formatting survives the round trip") {
  for (const double x : {0.1, 1.0 / 3.0, 5.33, -76.5, 1e-300, 2.5e17, 0.0,
                         0.004071735543473406, 7.55119135712233}) {
    CHECK(reparse(format_double(x)) == x);
  }
  CHECK(format_double(5.33) == "5.33");
  CHECK(format_double(-76.5) == "-76.5");
}

TEST_CASE("reduced parameter files parse with defaults and comments") {
  const std::string text =
      "# canonical values\n"
      "alpha_hat_0 = 5.33\n"
      "alpha_hat_1 = 2.28   # mid coordination\n"
      "alpha_hat_2 = -0.04\n"
      "beta_hat_1 = 3.07\n"
      "\t beta_hat_2 = 1.32\n"
      "beta_hat_3 = 0.31\n"
      "gamma0 = -76.5\n"
      "\n";
  const ParamFileContents file = parse_params(text);
  const ReducedParams expected = ReducedParams::tric_default();
  for (int i = 0; i < 3; ++i) {
    CHECK(file.params.alpha_hat[static_cast<std::size_t>(i)] ==
          expected.alpha_hat[static_cast<std::size_t>(i)]);
    CHECK(file.params.beta_hat[static_cast<std::size_t>(i)] ==
          expected.beta_hat[static_cast<std::size_t>(i)]);
  }
  CHECK(file.params.gamma0 == -76.5);
  CHECK(file.n0 == 25);  // default when omitted
}

TEST_CASE("raw parameter files reduce on load") {
  const std::string text =
      "alpha_0 = 7.23\nalpha_1 = 4.18\nalpha_2 = 1.86\n"
      "beta_1 = 4.97\nbeta_2 = 3.22\nbeta_3 = 2.21\n"
      "gamma0 = -76.5\ngamma1 = 0.4\nepsilon = 1.5\n"
      "n0 = 30\n";
  const ParamFileContents file = parse_params(text);
  const ReducedParams expected = ReducedParams::tric_default();
  for (int i = 0; i < 3; ++i) {
    CHECK(file.params.alpha_hat[static_cast<std::size_t>(i)] ==
          Approx(expected.alpha_hat[static_cast<std::size_t>(i)]).epsilon(1e-13));
    CHECK(file.params.beta_hat[static_cast<std::size_t>(i)] ==
          Approx(expected.beta_hat[static_cast<std::size_t>(i)]).epsilon(1e-13));
  }
  CHECK(file.n0 == 30);
}

TEST_CASE("parameter files reject structural problems") {
  CHECK_THROWS_AS(parse_params(""), ConfigError);
  CHECK_THROWS_AS(parse_params("alpha_hat_0 = 5.33\n"), ConfigError);  // incomplete set
  CHECK_THROWS_AS(parse_params("alpha_hat_0 5.33\n"), ConfigError);    // missing equals
  const std::string base =
      "alpha_hat_0 = 5.33\nalpha_hat_1 = 2.28\nalpha_hat_2 = -0.04\n"
      "beta_hat_1 = 3.07\nbeta_hat_2 = 1.32\nbeta_hat_3 = 0.31\ngamma0 = -76.5\n";
  CHECK_THROWS_AS(parse_params(base + "alpha_hat_0 = 1\n"), ConfigError);  // duplicate
  CHECK_THROWS_AS(parse_params(base + "flux = 12\n"), ConfigError);        // unknown key
  CHECK_THROWS_AS(parse_params(base + "alpha_0 = 1\n"), ConfigError);      // mixed forms
  CHECK_THROWS_AS(parse_params(base + "n0 = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_params(base + "n0 = zebra\n"), ConfigError);
}

TEST_CASE("parameter files round-trip exactly") {
  const ReducedParams p = ReducedParams::tric_default();
  const ParamFileContents file = parse_params(format_params(p, 25.0));
  CHECK(file.params.alpha_hat == p.alpha_hat);
  CHECK(file.params.beta_hat == p.beta_hat);
  CHECK(file.params.gamma0 == p.gamma0);
  CHECK(file.n0 == 25.0);
}

TEST_CASE("the shipped parameter file carries the canonical values") {
  const ParamFileContents file = load_params(std::string(RINGBIND_DATA_DIR) +
                                             "/tric_default.params");
  const ReducedParams expected = ReducedParams::tric_default();
  CHECK(file.params.alpha_hat == expected.alpha_hat);
  CHECK(file.params.beta_hat == expected.beta_hat);
  CHECK(file.params.gamma0 == expected.gamma0);
  CHECK(file.n0 == 25.0);
  CHECK_THROWS_AS(load_params("/nonexistent/params.txt"), ConfigError);
}

TEST_CASE("sweep CSV round-trips both engines") {
  const LatticeSpec spec(3);
  const ReducedParams p = ReducedParams::tric_default();
  const std::vector<double> grid{5.0, 50.0, 500.0};

  for (const Engine engine : {Engine::enumeration, Engine::transfer_dp}) {
    const SweepResult original = sweep(p, grid, 25.0, spec, engine);
    const SweepResult parsed = sweep_from_csv(sweep_to_csv(original));
    CHECK(parsed.ring_len == original.ring_len);
    CHECK(parsed.engine == original.engine);
    CHECK(parsed.n0 == Approx(original.n0).epsilon(1e-14));
    REQUIRE(parsed.rows.size() == original.rows.size());
    for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
      CHECK(parsed.rows[i].atp_uM == original.rows[i].atp_uM);
      CHECK(parsed.rows[i].n_total == original.rows[i].n_total);
      CHECK(parsed.rows[i].dist.mean_n == original.rows[i].dist.mean_n);
      CHECK(parsed.rows[i].dist.p_n == original.rows[i].dist.p_n);
      CHECK(parsed.rows[i].dist.mode_all == original.rows[i].dist.mode_all);
      CHECK(parsed.rows[i].dist.mode_nonzero == original.rows[i].dist.mode_nonzero);
      CHECK(parsed.rows[i].dist.dominant_state == original.rows[i].dist.dominant_state);
    }
  }
}

TEST_CASE("sweep CSV parsing rejects malformed input") {
  CHECK_THROWS_AS(sweep_from_csv(""), ConfigError);
  CHECK_THROWS_AS(sweep_from_csv("nope\n1,2,3\n"), ConfigError);
  const std::string header =
      "atp_uM,N,mean_n,P0,P1,P2,P3,P4,P5,P6,mode_all,mode_nonzero,dominant_state\n";
  CHECK_THROWS_AS(sweep_from_csv(header + "5,25\n"), ConfigError);  // short row
  // odd site count cannot split into two rings
  CHECK_THROWS_AS(
      sweep_from_csv("atp_uM,N,mean_n,P0,P1,P2,P3,P4,P5,mode_all,mode_nonzero,dominant_state\n"),
      ConfigError);
}

TEST_CASE("sweep JSON carries the same content") {
  const LatticeSpec spec(3);
  const SweepResult original =
      sweep(ReducedParams::tric_default(), {5.0, 500.0}, 25.0, spec, Engine::enumeration);
  const nlohmann::json doc = nlohmann::json::parse(sweep_to_json(original));
  CHECK(doc["ring_len"] == 3);
  CHECK(doc["total_sites"] == 6);
  CHECK(doc["engine"] == "enum");
  CHECK(doc["n0"] == 25.0);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["atp_uM"] == 5.0);
  CHECK(doc["rows"][0]["P"].size() == 7);
  CHECK(doc["rows"][0]["mean_n"].get<double>() == original.rows[0].dist.mean_n);
  CHECK(doc["rows"][0]["dominant_state"].is_string());

  const SweepResult dp = sweep(ReducedParams::tric_default(), {5.0}, 25.0, spec,
                               Engine::transfer_dp);
  const nlohmann::json dp_doc = nlohmann::json::parse(sweep_to_json(dp));
  CHECK(dp_doc["rows"][0]["dominant_state"].is_null());
}

TEST_CASE("dataset CSV round-trips and rejects malformed input") {
  Dataset data;
  data.mean_points.push_back({5.0, 0.004, 1.0});
  data.mean_points.push_back({500.0, 7.19, 2.5});
  data.hist_points.push_back({500.0, 8, 0.3, 1.0});
  data.hist_points.push_back({500.0, 0, 0.01, 0.5});

  const Dataset parsed = dataset_from_csv(dataset_to_csv(data));
  REQUIRE(parsed.mean_points.size() == 2);
  REQUIRE(parsed.hist_points.size() == 2);
  CHECK(parsed.mean_points[1].atp_uM == 500.0);
  CHECK(parsed.mean_points[1].value == 7.19);
  CHECK(parsed.mean_points[1].weight == 2.5);
  CHECK(parsed.hist_points[0].n == 8);
  CHECK(parsed.hist_points[1].weight == 0.5);

  // weight column may be left empty and defaults to 1
  const Dataset defaulted =
      dataset_from_csv("atp_uM,kind,n,value,weight\n50,mean,,3.1,\n50,hist,4,0.2,\n");
  CHECK(defaulted.mean_points[0].weight == 1.0);
  CHECK(defaulted.hist_points[0].weight == 1.0);

  CHECK_THROWS_AS(dataset_from_csv(""), ConfigError);
  CHECK_THROWS_AS(dataset_from_csv("bad header\n"), ConfigError);
  CHECK_THROWS_AS(dataset_from_csv("atp_uM,kind,n,value,weight\n50,typo,,3.1,1\n"), ConfigError);
  CHECK_THROWS_AS(dataset_from_csv("atp_uM,kind,n,value,weight\n50,mean,4,3.1,1\n"), ConfigError);
  CHECK_THROWS_AS(dataset_from_csv("atp_uM,kind,n,value,weight\n50,mean,,3.1\n"), ConfigError);
  CHECK_THROWS_AS(load_dataset("/nonexistent/data.csv"), ConfigError);
}

TEST_CASE("fit reports serialize to JSON and a readable table") {
  FitResult result;
  result.params = ReducedParams::tric_default();
  result.n0 = 25.0;
  result.objective = 4.2e-9;
  result.converged = true;
  result.restarts = 16;
  result.seed = 7;
  result.trace = {1.0, 0.5, 4.2e-9};

  const nlohmann::json doc = nlohmann::json::parse(fit_report_json(result));
  CHECK(doc["params"]["alpha_hat"][0] == 5.33);
  CHECK(doc["params"]["beta_hat"][2] == 0.31);
  CHECK(doc["params"]["gamma0"] == -76.5);
  CHECK(doc["n0"] == 25.0);
  CHECK(doc["objective"] == 4.2e-9);
  CHECK(doc["converged"] == true);
  CHECK(doc["restarts"] == 16);
  CHECK(doc["seed"] == 7);
  REQUIRE(doc["trace"].size() == 3);

  const std::string table = fit_report_table(result);
  CHECK(table.find("alpha_hat_0") != std::string::npos);
  CHECK(table.find("5.33") != std::string::npos);
  CHECK(table.find("gamma0") != std::string::npos);
  CHECK(table.find("converged") != std::string::npos);
  CHECK(table.find("yes") != std::string::npos);
}

TEST_CASE("text files write and read back") {
  const std::string path = "io_roundtrip_scratch.txt";
  write_text_file(path, "line one\nline two\n");
  CHECK(read_text_file(path) == "line one\nline two\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), ConfigError);
}
