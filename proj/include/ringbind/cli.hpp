#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ringbind/engine.hpp"

namespace ringbind::cli {

// Flags shared by every subcommand. engine_name and format_name stay as raw
// strings so that bad values surface through the normal error-to-exit-code
// mapping instead of inside argument parsing.
struct CommonOptions {
  std::string params_path;
  int ring_len = 8;
  std::optional<double> n0;
  std::string engine_name;
  std::string format_name = "csv";
  std::string out_path;
};

struct DistOptions {
  CommonOptions common;
  double atp_uM = 0;
};

struct SweepOptions {
  CommonOptions common;
  double atp_min_uM = 5;
  double atp_max_uM = 10000;
  int points = 50;
  std::vector<double> atp_list_uM;
};

struct CrossoverOptions {
  CommonOptions common;
  double lo_uM = 5;
  double hi_uM = 10000;
  double resolution_uM = 0.1;
};

struct FitOptions {
  CommonOptions common;
  std::string data_path;
  int restarts = 16;
  int max_iters = 4000;
  int polish_rounds = 3;
  std::uint64_t seed = 0;
};

struct VerifyOptions {
  CommonOptions common;
  int draws = 20;
  std::uint64_t seed = 12345;
};

// Each command returns its process exit code and never throws:
//   0  success
//   1  unusable input (bad flags, malformed files, invalid parameters)
//   2  well-formed request with no answer (bath too small, empty ensemble,
//      no crossover in the bracket)
//   3  verification failure
int cmd_dist(const DistOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);
int cmd_crossover(const CrossoverOptions& opt, std::ostream& out, std::ostream& err);
int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace ringbind::cli
