#include "gaborfio/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "gaborfio/error.hpp"
#include "gaborfio/version.hpp"

namespace gaborfio {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

template <typename M>
M matrix_from_json(const Json& j, int max_size) {
  if (!j.is_array() || j.empty() || static_cast<int>(j.size()) > max_size)
    throw ConfigError("expected a non-empty square matrix");
  const int n = static_cast<int>(j.size());
  M m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) throw ConfigError("matrix is not square");
    for (int c = 0; c < n; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const Json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) throw ConfigError("vector has wrong length");
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = j[i].get<double>();
  return v;
}

Json exponent_to_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

double exponent_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    throw ConfigError("exponent must be a number or \"inf\"");
  }
  return j.get<double>();
}

// JSON has no infinity or NaN; such values are written as strings.
Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

void write_table(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "# " << table.header.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw ContractError("table row has the wrong width");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw ConfigError("write failed for " + path.string());
}

CsvTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw ConfigError(path.string() + ": missing '# {json}' header line");
  try {
    t.header = Json::parse(line.substr(2));
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": bad header: " + e.what());
  }
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing column line");
  t.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != t.columns.size()) throw ConfigError(path.string() + ": ragged row");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      row.push_back(std::strtod(f.c_str(), &end));
      if (end == f.c_str()) throw ConfigError(path.string() + ": non-numeric field '" + f + "'");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json grid_to_json(const Grid& grid) {
  return {{"d", grid.dim()}, {"L", grid.period()}, {"n", grid.samples()}};
}

Grid grid_from_json(const Json& j) {
  return Grid(j.at("d").get<int>(), j.at("L").get<double>(), j.at("n").get<int>());
}

Json lattice_to_json(const Lattice& lattice) {
  Json j = grid_to_json(lattice.grid());
  j["alpha"] = lattice.alpha();
  j["beta"] = lattice.beta();
  return j;
}

Lattice lattice_from_json(const Json& j) {
  return Lattice(grid_from_json(j), j.at("alpha").get<double>(), j.at("beta").get<double>());
}

void write_function(const std::filesystem::path& path, const SampledFunction& f) {
  CsvTable t;
  t.header = grid_to_json(f.grid);
  t.header["kind"] = "sampled_function";
  t.header["side"] = to_string(f.side);
  const bool time = f.side == Side::time;
  const std::string axis = time ? "x" : "eta";
  if (f.grid.dim() == 1)
    t.columns = {axis};
  else
    t.columns = {axis + "1", axis + "2"};
  t.columns.push_back("re");
  t.columns.push_back("im");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const Vec p = time ? f.grid.point(i) : f.grid.frequency_point(i);
    std::vector<double> row(p.data(), p.data() + p.size());
    row.push_back(f.values[i].real());
    row.push_back(f.values[i].imag());
    t.rows.push_back(std::move(row));
  }
  write_table(path, t);
}

SampledFunction read_function(const std::filesystem::path& path) {
  const CsvTable t = read_table(path);
  if (t.header.value("kind", "") != "sampled_function")
    throw ConfigError(path.string() + ": not a sampled function file");
  const Grid grid = grid_from_json(t.header);
  const Side side = t.header.at("side").get<std::string>() == "time" ? Side::time : Side::frequency;
  SampledFunction f(grid, side);
  if (t.rows.size() != f.values.size()) throw ConfigError(path.string() + ": wrong number of samples");
  const std::size_t re = t.columns.size() - 2;
  for (std::size_t i = 0; i < t.rows.size(); ++i) f.values[i] = {t.rows[i][re], t.rows[i][re + 1]};
  return f;
}

void write_coefficients(const std::filesystem::path& path, const CoefficientArray& c) {
  CsvTable t;
  t.header = lattice_to_json(c.lattice);
  t.header["kind"] = "coefficients";
  t.columns = {"m", "n", "re", "im"};
  const Lattice& lat = c.lattice;
  for (int i = 0; i < lat.time_count(); ++i)
    for (int k = 0; k < lat.freq_count(); ++k)
      t.rows.push_back({lat.time_point(i), lat.freq_point(k), c(i, k).real(), c(i, k).imag()});
  write_table(path, t);
}

namespace {

int lattice_index(double value, double step, int count) {
  const long idx = std::lround(value / step) + count / 2;
  if (idx < 0 || idx >= count || std::abs((idx - count / 2) * step - value) > 1e-9 * std::max(1.0, std::abs(value)))
    throw ConfigError("coordinate " + format_double(value) + " is not a lattice point");
  return static_cast<int>(idx);
}

}  // namespace

CoefficientArray read_coefficients(const std::filesystem::path& path) {
  const CsvTable t = read_table(path);
  if (t.header.value("kind", "") != "coefficients") throw ConfigError(path.string() + ": not a coefficient file");
  CoefficientArray c(lattice_from_json(t.header));
  const Lattice& lat = c.lattice;
  for (const auto& r : t.rows) {
    const int i = lattice_index(r[0], lat.alpha(), lat.time_count());
    const int k = lattice_index(r[1], lat.beta(), lat.freq_count());
    c(i, k) = {r[2], r[3]};
  }
  return c;
}

void write_matrix(const std::filesystem::path& path, const GaborMatrix& m) {
  CsvTable t;
  t.header = lattice_to_json(m.lattice());
  t.header["kind"] = "gabor_matrix";
  t.header["epsilon"] = m.epsilon();
  t.header["route"] = to_string(m.route());
  t.header["phase"] = m.phase_name();
  t.header["nnz"] = m.nnz();
  t.columns = {"m_prime", "n_prime", "m", "n", "re", "im"};
  const Lattice& lat = m.lattice();
  t.rows.reserve(m.nnz());
  m.for_each([&](std::size_t row, std::size_t col, cplx v) {
    t.rows.push_back({lat.time_point(lat.time_of(row)), lat.freq_point(lat.freq_of(row)),
                      lat.time_point(lat.time_of(col)), lat.freq_point(lat.freq_of(col)), v.real(), v.imag()});
  });
  write_table(path, t);
}

GaborMatrix read_matrix(const std::filesystem::path& path) {
  const CsvTable t = read_table(path);
  if (t.header.value("kind", "") != "gabor_matrix") throw ConfigError(path.string() + ": not a Gabor matrix file");
  const Lattice lat = lattice_from_json(t.header);
  const std::string route = t.header.at("route").get<std::string>();
  GaborMatrix m(lat, t.header.at("epsilon").get<double>(),
                route == "direct" ? MatrixRoute::direct : MatrixRoute::symbol_stft,
                t.header.at("phase").get<std::string>());
  std::vector<std::vector<GaborMatrix::Entry>> cols(lat.size());
  for (const auto& r : t.rows) {
    const auto row = lat.flat(lattice_index(r[0], lat.alpha(), lat.time_count()),
                              lattice_index(r[1], lat.beta(), lat.freq_count()));
    const auto col = lat.flat(lattice_index(r[2], lat.alpha(), lat.time_count()),
                              lattice_index(r[3], lat.beta(), lat.freq_count()));
    cols[col].push_back({static_cast<std::uint32_t>(row), cplx(r[4], r[5])});
  }
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, std::move(cols[c]));
  return m;
}

Json to_json(const QuadraticPhase& qp) {
  return {{"A", matrix_to_json(qp.A)},   {"B", matrix_to_json(qp.B)},      {"C", matrix_to_json(qp.C)},
          {"x0", vec_to_json(qp.x0)}, {"eta0", vec_to_json(qp.eta0)}};
}

QuadraticPhase quadratic_phase_from_json(const Json& j) {
  QuadraticPhase qp;
  qp.B = matrix_from_json<Mat>(j.at("B"), 2);
  const int d = static_cast<int>(qp.B.rows());
  qp.A = j.contains("A") ? matrix_from_json<Mat>(j["A"], 2) : Mat(Mat::Zero(d, d));
  qp.C = j.contains("C") ? matrix_from_json<Mat>(j["C"], 2) : Mat(Mat::Zero(d, d));
  qp.x0 = j.contains("x0") ? vec_from_json(j["x0"], d) : Vec(Vec::Zero(d));
  qp.eta0 = j.contains("eta0") ? vec_from_json(j["eta0"], d) : Vec(Vec::Zero(d));
  try {
    qp.validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return qp;
}

Json to_json(const HamiltonianQuadratic& h) {
  Json rows = Json::array();
  for (int i = 0; i < h.H.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < h.H.cols(); ++j) row.push_back(h.H(i, j));
    rows.push_back(row);
  }
  return {{"H", rows}, {"convention", "weyl symbol pi z.Hz, flow exp(tJH)"}};
}

HamiltonianQuadratic hamiltonian_from_json(const Json& j) {
  HamiltonianQuadratic h{matrix_from_json<PhaseMat>(j.at("H"), 4)};
  h.validate();
  return h;
}

Json to_json(const MixedNormSpec& spec) {
  return {{"p", exponent_to_json(spec.p)}, {"q", exponent_to_json(spec.q)}, {"s", spec.s}};
}

MixedNormSpec norm_spec_from_json(const Json& j) {
  MixedNormSpec spec;
  if (j.contains("p")) spec.p = exponent_from_json(j["p"]);
  if (j.contains("q")) spec.q = exponent_from_json(j["q"]);
  if (j.contains("s")) spec.s = j["s"].get<double>();
  try {
    spec.validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

Json to_json(const FrameBounds& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"ratio", b.lower > 0 ? b.upper / b.lower : 0.0}};
}

Json to_json(const DecayReport& r) {
  Json profile = Json::array();
  for (const auto& b : r.profile)
    profile.push_back({{"r_lower", b.lower}, {"r_upper", b.upper}, {"count", b.count},
                       {"max_abs_entry", b.max_modulus}});
  Json constants = Json::array();
  for (std::size_t i = 0; i < r.orders.size(); ++i)
    constants.push_back({{"N", r.orders[i]},
                         {"C_N", number(r.constants[i])},
                         {"C_N_transposed", number(r.constants_transposed[i])},
                         {"C_N_raw", number(r.constants_raw[i])}});
  return {{"entries", r.records.size()},
          {"slope", number(r.slope)},
          {"slope_valid", r.slope_valid},
          {"fitted_bins", r.fitted_bins},
          {"constants", constants},
          {"distance_ratio", {{"min", number(r.distance_ratio_min)}, {"max", number(r.distance_ratio_max)}}},
          {"profile", profile}};
}

Json to_json(const SchurSums& s) {
  return {{"s", s.s},
          {"sup_column", s.sup_column},
          {"sup_row", s.sup_row},
          {"weighted_sup_column", s.weighted_sup_column},
          {"weighted_sup_row", s.weighted_sup_row},
          {"nested_mixed", s.nested_mixed},
          {"nested_mixed_adjoint", s.nested_mixed_adjoint},
          {"moderate_quotient", s.moderate_quotient}};
}

Json to_json(const NormRatioReport& r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.parameters.size(); ++i)
    rows.push_back({{"lambda", r.parameters[i]},
                    {"norm_f", r.input_norms[i]},
                    {"norm_Tf", r.output_norms[i]},
                    {"ratio", r.ratios[i]}});
  return {{"phase", r.phase}, {"symbol", r.symbol}, {"norm", to_json(r.spec)},
          {"route", r.route}, {"slope", number(r.slope)}, {"family", rows}};
}

Json to_json(const RouteDifference& d) {
  return {{"max_abs_difference", d.max_abs_difference},
          {"max_modulus", d.max_modulus},
          {"relative", d.relative()}};
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string report_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json report_envelope(const std::string& kind, const Json& config, Json result) {
  return {{"kind", kind},
          {"version", kVersion},
          {"revision", kGitRevision},
          {"config_hash", config_hash(config)},
          {"generated", report_timestamp()},
          {"config", config},
          {"result", std::move(result)}};
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace gaborfio
