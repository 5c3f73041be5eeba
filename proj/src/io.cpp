#include "ringbind/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace ringbind {

std::string format_double(double x) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view raw, const std::string& where) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0;
  const auto result = std::from_chars(s.data(), s.data() + s.size(), value);
  if (result.ec != std::errc{} || result.ptr != s.data() + s.size())
    throw ConfigError(where + ": cannot parse \"" + std::string(raw) + "\" as a number");
  return value;
}

int parse_int(std::string_view raw, const std::string& where) {
  std::string_view s = trim(raw);
  int value = 0;
  const auto result = std::from_chars(s.data(), s.data() + s.size(), value);
  if (result.ec != std::errc{} || result.ptr != s.data() + s.size())
    throw ConfigError(where + ": cannot parse \"" + std::string(raw) + "\" as an integer");
  return value;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
  return fields;
}

const char* const kReducedKeys[7] = {"alpha_hat_0", "alpha_hat_1", "alpha_hat_2",
                                     "beta_hat_1",  "beta_hat_2",  "beta_hat_3", "gamma0"};
const char* const kRawKeys[9] = {"alpha_0", "alpha_1", "alpha_2", "beta_1", "beta_2",
                                 "beta_3",  "gamma0",  "gamma1",  "epsilon"};

}  // namespace

ParamFileContents parse_params(std::string_view text) {
  std::map<std::string, double, std::less<>> entries;
  int line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = "parameter file line " + std::to_string(line_no);
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected \"key = value\", got \"" + std::string(line) + "\"");
    const std::string key{trim(line.substr(0, eq))};
    if (entries.count(key)) throw ConfigError(where + ": duplicate key \"" + key + "\"");
    entries[key] = parse_double(line.substr(eq + 1), where + " (" + key + ")");
  }

  // gamma0 belongs to both forms, so it cannot distinguish them
  bool any_reduced = false, any_raw = false;
  for (const char* key : kReducedKeys)
    if (std::string_view(key) != "gamma0") any_reduced |= entries.count(key) > 0;
  for (const char* key : kRawKeys)
    if (std::string_view(key) != "gamma0") any_raw |= entries.count(key) > 0;
  if (any_reduced && any_raw)
    throw ConfigError("parameter file mixes reduced (alpha_hat_*) and raw (alpha_*) keys");
  if (!any_reduced && !any_raw) throw ConfigError("parameter file defines no site parameters");

  const auto take = [&entries](const char* key) {
    const auto it = entries.find(key);
    if (it == entries.end())
      throw ConfigError("parameter file is missing key \"" + std::string(key) + "\"");
    const double value = it->second;
    entries.erase(it);
    return value;
  };

  ParamFileContents out;
  if (any_reduced) {
    out.params.alpha_hat = {take("alpha_hat_0"), take("alpha_hat_1"), take("alpha_hat_2")};
    out.params.beta_hat = {take("beta_hat_1"), take("beta_hat_2"), take("beta_hat_3")};
    out.params.gamma0 = take("gamma0");
  } else {
    RawParams raw;
    raw.alpha = {take("alpha_0"), take("alpha_1"), take("alpha_2")};
    raw.beta = {take("beta_1"), take("beta_2"), take("beta_3")};
    raw.gamma0 = take("gamma0");
    raw.gamma1 = take("gamma1");
    raw.epsilon = take("epsilon");
    out.params = reduce_params(raw);
  }
  if (entries.count("n0")) {
    out.n0 = entries["n0"];
    entries.erase("n0");
    if (!std::isfinite(out.n0) || out.n0 <= 0)
      throw ConfigError("parameter file n0 must be positive and finite");
  }
  if (!entries.empty())
    throw ConfigError("parameter file has unknown key \"" + entries.begin()->first + "\"");
  validate(out.params);
  return out;
}

ParamFileContents load_params(const std::string& path) {
  try {
    return parse_params(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string format_params(const ReducedParams& p, double n0) {
  std::string out;
  for (int i = 0; i < 3; ++i)
    out += std::string(kReducedKeys[i]) + " = " + format_double(p.alpha_hat[i]) + "\n";
  for (int i = 0; i < 3; ++i)
    out += std::string(kReducedKeys[3 + i]) + " = " + format_double(p.beta_hat[i]) + "\n";
  out += "gamma0 = " + format_double(p.gamma0) + "\n";
  out += "n0 = " + format_double(n0) + "\n";
  return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  const LatticeSpec spec(sweep.ring_len);
  const int m = spec.total_sites();
  std::string out = "atp_uM,N,mean_n";
  for (int n = 0; n <= m; ++n) out += ",P" + std::to_string(n);
  out += ",mode_all,mode_nonzero,dominant_state\n";
  for (const SweepRow& row : sweep.rows) {
    out += format_double(row.atp_uM) + "," + format_double(row.n_total) + "," + format_double(row.dist.mean_n);
    for (int n = 0; n <= m; ++n) out += "," + format_double(row.dist.p_n[static_cast<std::size_t>(n)]);
    out += "," + std::to_string(row.dist.mode_all) + "," + std::to_string(row.dist.mode_nonzero) + ",";
    if (row.dist.dominant_state) out += format_state(*row.dist.dominant_state, spec);
    out += "\n";
  }
  return out;
}

std::string sweep_to_json(const SweepResult& sweep) {
  const LatticeSpec spec(sweep.ring_len);
  nlohmann::ordered_json doc;
  doc["ring_len"] = sweep.ring_len;
  doc["total_sites"] = spec.total_sites();
  doc["n0"] = sweep.n0;
  doc["engine"] = engine_name(sweep.engine);
  doc["rows"] = nlohmann::ordered_json::array();
  for (const SweepRow& row : sweep.rows) {
    nlohmann::ordered_json r;
    r["atp_uM"] = row.atp_uM;
    r["N"] = row.n_total;
    r["mean_n"] = row.dist.mean_n;
    r["P"] = row.dist.p_n;
    r["mode_all"] = row.dist.mode_all;
    r["mode_nonzero"] = row.dist.mode_nonzero;
    if (row.dist.dominant_state)
      r["dominant_state"] = format_state(*row.dist.dominant_state, spec);
    else
      r["dominant_state"] = nullptr;
    r["dominant_tie"] = row.dist.dominant_tie;
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

SweepResult sweep_from_csv(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw ConfigError("sweep CSV is empty");

  const std::vector<std::string_view> header = split_fields(lines[i]);
  if (header.size() < 7 || header[0] != "atp_uM" || header[1] != "N" || header[2] != "mean_n")
    throw ConfigError("sweep CSV header does not start with atp_uM,N,mean_n");
  const int m = static_cast<int>(header.size()) - 7;
  for (int n = 0; n <= m; ++n)
    if (header[static_cast<std::size_t>(3 + n)] != "P" + std::to_string(n))
      throw ConfigError("sweep CSV header has a malformed probability column list");
  if (header[header.size() - 3] != "mode_all" || header[header.size() - 2] != "mode_nonzero" ||
      header.back() != "dominant_state")
    throw ConfigError("sweep CSV header does not end with mode_all,mode_nonzero,dominant_state");
  if (m % 2 != 0) throw ConfigError("sweep CSV has an odd site count");

  SweepResult sweep;
  sweep.ring_len = m / 2;
  const LatticeSpec spec(sweep.ring_len);
  bool all_have_dominant = true;
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::string where = "sweep CSV line " + std::to_string(i + 1);
    const std::vector<std::string_view> fields = split_fields(lines[i]);
    if (fields.size() != header.size())
      throw ConfigError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    SweepRow row;
    row.atp_uM = parse_double(fields[0], where);
    row.n_total = parse_double(fields[1], where);
    row.dist.total_sites = m;
    row.dist.mean_n = parse_double(fields[2], where);
    row.dist.p_n.resize(static_cast<std::size_t>(m) + 1);
    for (int n = 0; n <= m; ++n)
      row.dist.p_n[static_cast<std::size_t>(n)] =
          parse_double(fields[static_cast<std::size_t>(3 + n)], where);
    row.dist.mode_all = parse_int(fields[header.size() - 3], where);
    row.dist.mode_nonzero = parse_int(fields[header.size() - 2], where);
    if (!fields.back().empty())
      row.dist.dominant_state = parse_state(fields.back(), spec);
    else
      all_have_dominant = false;
    sweep.rows.push_back(std::move(row));
  }
  sweep.engine = all_have_dominant && !sweep.rows.empty() ? Engine::enumeration
                                                          : Engine::transfer_dp;
  sweep.n0 = sweep.rows.empty() ? 25.0 : 5.0 * sweep.rows[0].n_total / sweep.rows[0].atp_uM;
  return sweep;
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "atp_uM,kind,n,value,weight\n";
  for (const MeanPoint& pt : data.mean_points)
    out += format_double(pt.atp_uM) + ",mean,," + format_double(pt.value) + "," + format_double(pt.weight) + "\n";
  for (const HistPoint& pt : data.hist_points)
    out += format_double(pt.atp_uM) + ",hist," + std::to_string(pt.n) + "," + format_double(pt.value) +
           "," + format_double(pt.weight) + "\n";
  return out;
}

Dataset dataset_from_csv(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size() || trim(lines[i]) != "atp_uM,kind,n,value,weight")
    throw ConfigError("dataset CSV must start with the header atp_uM,kind,n,value,weight");

  Dataset data;
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::string where = "dataset CSV line " + std::to_string(i + 1);
    const std::vector<std::string_view> fields = split_fields(lines[i]);
    if (fields.size() != 5)
      throw ConfigError(where + ": expected 5 fields, got " + std::to_string(fields.size()));
    const double conc = parse_double(fields[0], where);
    const double value = parse_double(fields[3], where);
    const double weight = fields[4].empty() ? 1.0 : parse_double(fields[4], where);
    if (fields[1] == "mean") {
      if (!fields[2].empty())
        throw ConfigError(where + ": mean rows must leave the n column empty");
      data.mean_points.push_back(MeanPoint{conc, value, weight});
    } else if (fields[1] == "hist") {
      data.hist_points.push_back(HistPoint{conc, parse_int(fields[2], where), value, weight});
    } else {
      throw ConfigError(where + ": kind must be mean or hist, got \"" + std::string(fields[1]) +
                        "\"");
    }
  }
  return data;
}

Dataset load_dataset(const std::string& path) {
  try {
    return dataset_from_csv(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string fit_report_json(const FitResult& fit) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"alpha_hat", fit.params.alpha_hat},
                   {"beta_hat", fit.params.beta_hat},
                   {"gamma0", fit.params.gamma0}};
  doc["n0"] = fit.n0;
  doc["objective"] = fit.objective;
  doc["converged"] = fit.converged;
  doc["restarts"] = fit.restarts;
  doc["seed"] = fit.seed;
  doc["trace"] = fit.trace;
  return doc.dump(2) + "\n";
}

std::string fit_report_table(const FitResult& fit) {
  char buf[64];
  std::string out = "parameter     value\n";
  const auto row = [&out, &buf](const char* name, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-13s %s\n", name, value.c_str());
    out += buf;
  };
  row("alpha_hat_0", format_double(fit.params.alpha_hat[0]));
  row("alpha_hat_1", format_double(fit.params.alpha_hat[1]));
  row("alpha_hat_2", format_double(fit.params.alpha_hat[2]));
  row("beta_hat_1", format_double(fit.params.beta_hat[0]));
  row("beta_hat_2", format_double(fit.params.beta_hat[1]));
  row("beta_hat_3", format_double(fit.params.beta_hat[2]));
  row("gamma0", format_double(fit.params.gamma0));
  row("n0", format_double(fit.n0));
  row("objective", format_double(fit.objective));
  row("converged", fit.converged ? "yes" : "no");
  row("restarts", std::to_string(fit.restarts));
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open \"" + path + "\" for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ConfigError("failed while reading \"" + path + "\"");
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open \"" + path + "\" for writing");
  out << content;
  if (!out) throw ConfigError("failed while writing \"" + path + "\"");
}

}  // namespace ringbind
