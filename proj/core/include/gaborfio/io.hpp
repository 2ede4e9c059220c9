#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaborfio/analysis.hpp"
#include "gaborfio/fio.hpp"
#include "gaborfio/gabor.hpp"
#include "gaborfio/metaplectic.hpp"
#include "gaborfio/phase.hpp"

namespace gaborfio {

using Json = nlohmann::json;

// Tabular files: a first line "# <json header>", a line of column names,
// then comma-separated rows. Doubles are written with 17 significant digits
// so every file reads back bit-identically.
struct CsvTable {
  Json header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_table(const std::filesystem::path& path);

void write_function(const std::filesystem::path& path, const SampledFunction& f);
SampledFunction read_function(const std::filesystem::path& path);

void write_coefficients(const std::filesystem::path& path, const CoefficientArray& c);
CoefficientArray read_coefficients(const std::filesystem::path& path);

// Rows (m', n', m, n, re, im) in lattice coordinates, header with the lattice,
// epsilon, route and phase name.
void write_matrix(const std::filesystem::path& path, const GaborMatrix& m);
GaborMatrix read_matrix(const std::filesystem::path& path);

Json grid_to_json(const Grid& grid);
Grid grid_from_json(const Json& j);
Json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const Json& j);

Json to_json(const QuadraticPhase& qp);
QuadraticPhase quadratic_phase_from_json(const Json& j);
Json to_json(const HamiltonianQuadratic& h);
HamiltonianQuadratic hamiltonian_from_json(const Json& j);
Json to_json(const MixedNormSpec& spec);
MixedNormSpec norm_spec_from_json(const Json& j);

Json to_json(const FrameBounds& b);
Json to_json(const DecayReport& r);
Json to_json(const SchurSums& s);
Json to_json(const NormRatioReport& r);
Json to_json(const RouteDifference& d);

// FNV-1a 64-bit hash of the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const Json& config);

// UTC time in ISO 8601; SOURCE_DATE_EPOCH overrides the clock.
std::string report_timestamp();

// {"kind", "version", "revision", "config_hash", "generated", "config", "result"}
Json report_envelope(const std::string& kind, const Json& config, Json result);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace gaborfio
