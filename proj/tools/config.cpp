#include "config.hpp"

#include <cmath>
#include <set>

#include "gaborfio/error.hpp"

namespace gaborfio::cli {
namespace {

PhaseParams params_of(const Json& section) {
  PhaseParams out;
  if (!section.contains("params")) return out;
  const Json& p = section["params"];
  if (!p.is_object()) throw ConfigError("params must be an object of numbers");
  for (const auto& [key, value] : p.items()) {
    if (!value.is_number()) throw ConfigError("parameter '" + key + "' must be a number");
    out[key] = value.get<double>();
  }
  return out;
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("missing or malformed field '") + key + "'");
  }
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' in " + where);
}

}  // namespace

Json default_config() {
  return Json::parse(R"({
    "grid": {"d": 1, "L": 16, "n": 256},
    "window": {"width": 1.0},
    "lattice": {"alpha": 0.5, "beta": 0.5},
    "phase": {"name": "chirp", "params": {}},
    "symbol": {"name": "one", "params": {}},
    "norm": {"p": 2, "q": 2, "s": 0},
    "epsilon": 1e-8,
    "family": {"lambda_min": 0.25, "lambda_max": 4.0, "count": 9},
    "strides": {"time": 1, "freq": 1},
    "input": {"kind": "gaussian", "center": 0.0, "width": 1.0},
    "doubling": true,
    "weights": [0, 1, 2],
    "hamiltonian": {"preset": "harmonic-oscillator"},
    "times": [0.0, 0.19634954084936207, 0.39269908169872414, 0.5890486225480862],
    "selftest": {"seed": 20240601, "only": []},
    "output": "gaborfio-out"
  })");
}

Json subcommand_defaults(const std::string& subcommand) {
  const Json demo = Json::parse(R"({
    "grid": {"d": 1, "L": 128, "n": 16384},
    "norm": {"p": "inf", "q": 1, "s": 0},
    "family": {"lambda_min": 0.001, "lambda_max": 0.1, "count": 9},
    "strides": {"time": 16, "freq": 8}
  })");
  if (subcommand == "chirp-demo") {
    Json j = demo;
    j["phase"] = {{"name", "chirp"}, {"params", Json::object()}};
    return j;
  }
  if (subcommand == "multiplier-demo") {
    Json j = demo;
    j["phase"] = {{"name", "fourier-multiplier"}, {"params", Json::object()}};
    return j;
  }
  if (subcommand == "schrodinger") return {{"input", {{"kind", "gaussian"}, {"center", 1.0}, {"width", 1.0}}}};
  return Json::object();
}

Phase phase_from_config(const Json& section, int dim) {
  check_keys(section, {"name", "params", "quadratic"}, "phase");
  if (section.contains("quadratic")) {
    const QuadraticPhase qp = quadratic_phase_from_json(section["quadratic"]);
    if (qp.dim() != dim) throw ConfigError("quadratic phase dimension does not match the grid");
    return Phase::quadratic(section.value("name", std::string("quadratic")), qp);
  }
  return catalog_phase(get<std::string>(section, "name"), dim, params_of(section));
}

ExperimentConfig ExperimentConfig::parse(const Json& merged) {
  check_keys(merged,
             {"grid", "window", "lattice", "phase", "symbol", "norm", "epsilon", "family", "strides", "input",
              "doubling", "weights", "hamiltonian", "times", "selftest", "output"},
             "config");
  try {
    const Json& g = merged.at("grid");
    check_keys(g, {"d", "L", "n"}, "grid");
    Grid grid(get<int>(g, "d"), get<double>(g, "L"), get<int>(g, "n"));

    const double width = get<double>(merged.at("window"), "width");
    if (!(width > 0.0)) throw ConfigError("window width must be positive");
    const double alpha = get<double>(merged.at("lattice"), "alpha");
    const double beta = get<double>(merged.at("lattice"), "beta");
    if (grid.dim() == 1) Lattice(grid, alpha, beta);

    Phase phase = phase_from_config(merged.at("phase"), grid.dim());
    const Json& s = merged.at("symbol");
    check_keys(s, {"name", "params"}, "symbol");
    Symbol symbol = catalog_symbol(get<std::string>(s, "name"), grid, params_of(s));

    const MixedNormSpec norm = norm_spec_from_json(merged.at("norm"));
    const double epsilon = get<double>(merged, "epsilon");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in [0, 1)");

    const Json& fam = merged.at("family");
    const int count = get<int>(fam, "count");
    if (count < 2) throw ConfigError("family.count must be >= 2");
    std::vector<double> lambdas = log_space(get<double>(fam, "lambda_min"), get<double>(fam, "lambda_max"), count);

    const StftStrides strides{get<int>(merged.at("strides"), "time"), get<int>(merged.at("strides"), "freq")};
    if (strides.time < 1 || strides.freq < 1) throw ConfigError("strides must be >= 1");

    std::vector<double> weights = merged.at("weights").get<std::vector<double>>();
    for (double w : weights)
      if (!(w >= 0.0)) throw ConfigError("weights must be >= 0");

    ExperimentConfig cfg{merged,
                         grid,
                         width,
                         alpha,
                         beta,
                         std::move(phase),
                         std::move(symbol),
                         norm,
                         epsilon,
                         std::move(lambdas),
                         strides,
                         get<bool>(merged, "doubling"),
                         std::move(weights),
                         get<std::string>(merged, "output")};
    // Touch the remaining sections so malformed values fail before any work.
    cfg.input();
    cfg.hamiltonian();
    cfg.times();
    return cfg;
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

SampledFunction ExperimentConfig::window() const {
  return gaussian(grid, Vec::Zero(grid.dim()), window_width);
}

SampledFunction ExperimentConfig::input() const {
  const Json& in = raw.at("input");
  const std::string kind = get<std::string>(in, "kind");
  if (kind == "gaussian") {
    check_keys(in, {"kind", "center", "width"}, "input");
    const double width = in.value("width", 1.0);
    if (!(width > 0.0)) throw ConfigError("input width must be positive");
    return gaussian(grid, Vec::Constant(grid.dim(), in.value("center", 0.0)), width);
  }
  if (kind == "dilated-gaussian") {
    check_keys(in, {"kind", "lambda"}, "input");
    return dilated_gaussian(grid, get<double>(in, "lambda"));
  }
  if (kind == "file") {
    check_keys(in, {"kind", "path"}, "input");
    SampledFunction f = read_function(get<std::string>(in, "path"));
    if (!(f.grid == grid)) throw ConfigError("input file grid does not match the configured grid");
    return f;
  }
  throw ConfigError("unknown input kind '" + kind + "'");
}

HamiltonianQuadratic ExperimentConfig::hamiltonian() const {
  const Json& h = raw.at("hamiltonian");
  if (h.contains("H")) return hamiltonian_from_json(h);
  const std::string preset = get<std::string>(h, "preset");
  if (preset == "harmonic-oscillator") return HamiltonianQuadratic::harmonic_oscillator(grid.dim());
  if (preset == "free-particle") return HamiltonianQuadratic::free_particle(grid.dim());
  throw ConfigError("unknown Hamiltonian preset '" + preset + "'");
}

std::vector<double> ExperimentConfig::times() const {
  auto t = raw.at("times").get<std::vector<double>>();
  if (t.empty()) throw ConfigError("times must be non-empty");
  for (double v : t)
    if (!std::isfinite(v)) throw ConfigError("times must be finite");
  return t;
}

ExperimentConfig ExperimentConfig::doubled() const {
  Json j = raw;
  j["grid"]["L"] = 2.0 * grid.period();
  j["grid"]["n"] = 4 * grid.samples();
  return parse(j);
}

}  // namespace gaborfio::cli
