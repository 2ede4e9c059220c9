#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gaborfio/io.hpp"

namespace gaborfio::cli {

// Defaults for every field; subcommand defaults and the config file are
// merge-patched on top, then flag overrides.
Json default_config();
Json subcommand_defaults(const std::string& subcommand);

// Validated view of a merged config. Construction throws ConfigError before
// any computation when a field is malformed or names an unknown catalog entry.
struct ExperimentConfig {
  Json raw;
  Grid grid;
  double window_width;
  double alpha;
  double beta;
  Phase phase;
  Symbol symbol;
  MixedNormSpec norm;
  double epsilon;
  std::vector<double> lambdas;
  StftStrides strides;
  bool doubling;
  std::vector<double> weights;
  std::filesystem::path output;

  static ExperimentConfig parse(const Json& merged);

  Lattice lattice() const { return Lattice(grid, alpha, beta); }
  SampledFunction window() const;
  // The configured input function ("input" section).
  SampledFunction input() const;
  HamiltonianQuadratic hamiltonian() const;
  std::vector<double> times() const;
  // Same experiment with the lattice extent doubled in time and frequency.
  ExperimentConfig doubled() const;
};

Phase phase_from_config(const Json& section, int dim);

}  // namespace gaborfio::cli
