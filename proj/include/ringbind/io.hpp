#pragma once

#include <string>
#include <string_view>

#include "ringbind/fit.hpp"
#include "ringbind/sweep.hpp"

namespace ringbind {

// Parameter files are flat "key = value" lines with '#' comments. Either the
// reduced keys (alpha_hat_0..2, beta_hat_1..3, gamma0) or the raw keys
// (alpha_0..2, beta_1..3, gamma0, gamma1, epsilon) must be present in full;
// raw files are reduced on load. n0 is optional and defaults to 25.
struct ParamFileContents {
  ReducedParams params;
  double n0 = 25;
};

// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);

ParamFileContents parse_params(std::string_view text);
ParamFileContents load_params(const std::string& path);
std::string format_params(const ReducedParams& p, double n0);

// Occupancy sweeps as CSV with the fixed header
// atp_uM,N,mean_n,P0..PM,mode_all,mode_nonzero,dominant_state
// (the dominant column is empty for transfer-engine rows), or as a JSON
// document mirroring the same fields. Numbers print with enough digits to
// round-trip exactly.
std::string sweep_to_csv(const SweepResult& sweep);
std::string sweep_to_json(const SweepResult& sweep);
SweepResult sweep_from_csv(std::string_view text);

// Datasets as CSV with the fixed header atp_uM,kind,n,value,weight where
// kind is mean or hist and n is empty for mean rows.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(std::string_view text);
Dataset load_dataset(const std::string& path);

// Fit reports: a JSON document with parameters, objective, convergence and
// trace, and a plain text parameter table.
std::string fit_report_json(const FitResult& fit);
std::string fit_report_table(const FitResult& fit);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace ringbind
