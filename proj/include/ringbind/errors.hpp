#pragma once

#include <stdexcept>
#include <string>

namespace ringbind {

// Error taxonomy, one type per failure domain, so callers (the CLI in
// particular) can map failures to exit codes without matching strings.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lattice shape violations: ring too short, occupancy list of wrong length.
struct TopologyError : Error {
  using Error::Error;
};

// Out-of-range state index, site id, or bound count.
struct IndexError : Error {
  using Error::Error;
};

// Non-finite or malformed interaction parameters.
struct ParamError : Error {
  using Error::Error;
};

// Nonpositive concentration or a bath too small for the lattice (N <= M).
struct BathError : Error {
  using Error::Error;
};

// Bad configuration: files, flags, grids, fit settings.
struct ConfigError : Error {
  using Error::Error;
};

// Dataset validation failures.
struct DataError : Error {
  using Error::Error;
};

// Every microstate carries zero weight; no distribution exists.
struct DegenerateEnsembleError : Error {
  using Error::Error;
};

// A bracketed search found nothing (e.g. no mode crossover in the bracket).
struct NotFoundError : Error {
  using Error::Error;
};

}  // namespace ringbind
