#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>

#include "gaborfio/analysis.hpp"
#include "gaborfio/error.hpp"
#include "gaborfio/selftest.hpp"

namespace gaborfio::cli {
namespace {

namespace fs = std::filesystem;

void require_1d(const ExperimentConfig& cfg, const std::string& what) {
  if (cfg.grid.dim() != 1) throw ConfigError(what + " is available for d = 1 only");
}

fs::path emit(const ExperimentConfig& cfg, const std::string& kind, Json result) {
  const fs::path path = cfg.output / (kind + ".json");
  write_json(path, report_envelope(kind, cfg.raw, std::move(result)));
  std::cout << "wrote " << path.string() << '\n';
  return path;
}

void emit_file(const fs::path& path) { std::cout << "wrote " << path.string() << '\n'; }

void emit_table(const ExperimentConfig& cfg, const std::string& name, CsvTable table) {
  table.header["config_hash"] = config_hash(cfg.raw);
  const fs::path path = cfg.output / (name + ".csv");
  write_table(path, table);
  std::cout << "wrote " << path.string() << '\n';
}

double relative_error(const SampledFunction& a, const SampledFunction& b) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    diff += std::norm(a.values[i] - b.values[i]);
    norm += std::norm(b.values[i]);
  }
  return norm > 0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

CanonicalMap canonical_map_of(const Phase& phase) {
  if (phase.quadratic_form()) return canonical_map_quadratic(*phase.quadratic_form());
  return CanonicalMap::from_phase(phase);
}

PhaseBox torus_box(const Grid& grid) {
  return PhaseBox::centered(grid.dim(), 0.5 * grid.period(), 0.5 * grid.bandwidth());
}

Json phase_conditions(const Phase& phase, const Grid& grid) {
  const auto r = check_phase_conditions(phase, torus_box(grid));
  return {{"samples", r.samples},           {"sup_second", r.sup_second},   {"sup_third", r.sup_third},
          {"min_det", r.min_det},           {"delta", r.delta},             {"det_condition", r.det_condition},
          {"second_growth", r.second_growth}, {"third_growth", r.third_growth}, {"exact", r.exact}};
}

int cmd_stft(const ExperimentConfig& cfg) {
  require_1d(cfg, "stft");
  const SampledFunction f = cfg.input();
  const SampledFunction g = cfg.window();
  const STFTField v = stft(f, g);
  CsvTable t;
  t.header = grid_to_json(cfg.grid);
  t.header["kind"] = "stft_magnitude";
  t.columns = {"x", "eta", "abs"};
  const int n = cfg.grid.samples();
  for (int j = 0; j < n; j += cfg.strides.time)
    for (int k = 0; k < n; k += cfg.strides.freq)
      t.rows.push_back({cfg.grid.coordinate(j), cfg.grid.frequency(k), std::abs(v.at(j, k))});
  emit_table(cfg, "stft", std::move(t));
  // Moyal: ||V_g f||_{L^2} = ||f|| ||g||.
  emit(cfg, "stft", {{"stft_l2", v.l2_norm()}, {"f_l2", f.l2_norm()}, {"g_l2", g.l2_norm()},
                     {"moyal_defect", std::abs(v.l2_norm() - f.l2_norm() * g.l2_norm())}});
  return 0;
}

int cmd_frame(const ExperimentConfig& cfg) {
  require_1d(cfg, "frame");
  const GaborSystem gsys = GaborSystem::build(cfg.window(), cfg.lattice());
  const Lattice& lat = gsys.lattice();
  write_function(cfg.output / "window.csv", gsys.window());
  emit_file(cfg.output / "window.csv");
  write_function(cfg.output / "dual.csv", gsys.dual());
  emit_file(cfg.output / "dual.csv");
  write_function(cfg.output / "tight.csv", gsys.tight());
  emit_file(cfg.output / "tight.csv");
  const SampledFunction f = cfg.input();
  const double tight = relative_error(synthesize(gsys.tight(), lat, analyze(gsys.tight(), lat, f)), f);
  const double dual = relative_error(synthesize(gsys.dual(), lat, analyze(gsys.window(), lat, f)), f);
  emit(cfg, "frame", {{"bounds", to_json(gsys.bounds())},
                      {"lattice", lattice_to_json(lat)},
                      {"tight_reconstruction_error", tight},
                      {"dual_reconstruction_error", dual},
                      {"files", {"window.csv", "dual.csv", "tight.csv"}}});
  return 0;
}

int cmd_gabor_matrix(const ExperimentConfig& cfg) {
  require_1d(cfg, "gabor-matrix");
  const GaborSystem gsys = GaborSystem::build(cfg.window(), cfg.lattice());
  const GaborMatrix direct = gabor_matrix_direct(cfg.phase, cfg.symbol, gsys, cfg.epsilon);
  const GaborMatrix via =
      gabor_matrix_via_symbol_stft(cfg.phase, sample_symbol(cfg.symbol, cfg.grid), gsys, cfg.epsilon);
  write_matrix(cfg.output / "matrix_direct.csv", direct);
  emit_file(cfg.output / "matrix_direct.csv");
  write_matrix(cfg.output / "matrix_symbol_stft.csv", via);
  emit_file(cfg.output / "matrix_symbol_stft.csv");

  const Lattice& lat = gsys.lattice();
  const SampledFunction f = cfg.input();
  FioOptions options;
  const SampledFunction tf = apply_fio(cfg.phase, cfg.symbol, f, options);
  const SampledFunction through =
      synthesize(gsys.tight(), lat, apply_via_matrix(direct, analyze(gsys.tight(), lat, f)));
  emit(cfg, "gabor_matrix",
       {{"lattice", lattice_to_json(lat)},
        {"epsilon", cfg.epsilon},
        {"direct", {{"nnz", direct.nnz()}, {"max_modulus", direct.max_modulus()}}},
        {"symbol_stft", {{"nnz", via.nnz()}, {"max_modulus", via.max_modulus()}}},
        {"route_difference", to_json(compare_matrices(direct, via))},
        {"matrix_vs_apply_fio", relative_error(through, tf)},
        {"files", {"matrix_direct.csv", "matrix_symbol_stft.csv"}}});
  return 0;
}

Json decay_for(const ExperimentConfig& cfg, DecayReport& out) {
  const GaborSystem gsys = GaborSystem::build(cfg.window(), cfg.lattice());
  const GaborMatrix m = gabor_matrix_direct(cfg.phase, cfg.symbol, gsys, cfg.epsilon);
  out = decay_report(m, cfg.phase, canonical_map_of(cfg.phase));
  Json j = to_json(out);
  j["lattice"] = lattice_to_json(gsys.lattice());
  j["nnz"] = m.nnz();
  return j;
}

int cmd_decay(const ExperimentConfig& cfg) {
  require_1d(cfg, "decay");
  DecayReport base;
  Json result = {{"phase", cfg.phase.name()}, {"symbol", cfg.symbol.name()}};
  result["report"] = decay_for(cfg, base);
  result["phase_conditions"] = phase_conditions(cfg.phase, cfg.grid);
  const BilipschitzReport bl = bilipschitz(canonical_map_of(cfg.phase), torus_box(cfg.grid));
  result["bilipschitz"] = {{"min_ratio", bl.min_ratio}, {"max_ratio", bl.max_ratio}, {"constant", bl.constant}};

  CsvTable t;
  t.header = {{"kind", "decay_profile"}, {"phase", cfg.phase.name()}};
  t.columns = {"r_bin", "max_abs_entry"};
  for (const auto& b : base.profile)
    if (b.count > 0) t.rows.push_back({std::sqrt(b.lower * b.upper), b.max_modulus});
  emit_table(cfg, "decay_profile", std::move(t));

  if (cfg.doubling) {
    DecayReport large;
    result["doubled"] = decay_for(cfg.doubled(), large);
    Json stability = Json::array();
    for (std::size_t i = 0; i < base.orders.size(); ++i) {
      const double a = base.constants[i], b = large.constants[i];
      stability.push_back({{"N", base.orders[i]}, {"ratio", std::max(a, b) / std::min(a, b)},
                           {"stable", std::max(a, b) / std::min(a, b) < 2.0}});
    }
    result["stability"] = stability;
  }
  emit(cfg, "decay_report", result);
  for (std::size_t i = 0; i < base.orders.size(); ++i)
    std::printf("C_%d = %.6g\n", base.orders[i], base.constants[i]);
  std::printf("slope = %.3f over %d bins\n", base.slope, base.fitted_bins);
  return 0;
}

Json schur_for(const ExperimentConfig& cfg, std::vector<SchurSums>& out) {
  const GaborSystem gsys = GaborSystem::build(cfg.window(), cfg.lattice());
  const GaborMatrix m = gabor_matrix_direct(cfg.phase, cfg.symbol, gsys, cfg.epsilon);
  const CanonicalMap chi = canonical_map_of(cfg.phase);
  Json sums = Json::array();
  for (double s : cfg.weights) {
    out.push_back(schur_sums(m, s, chi));
    sums.push_back(to_json(out.back()));
  }
  return {{"lattice", lattice_to_json(gsys.lattice())}, {"sums", sums}};
}

int cmd_schur(const ExperimentConfig& cfg) {
  require_1d(cfg, "schur");
  std::vector<SchurSums> base;
  Json result = {{"phase", cfg.phase.name()}, {"symbol", cfg.symbol.name()}};
  result["base"] = schur_for(cfg, base);
  const double m1 = m_infty_1_norm_estimate(sample_symbol(cfg.symbol, cfg.grid));
  result["symbol_m_infty_1"] = m1;
  if (!base.empty())
    result["normalized_by_symbol"] = {{"sup_column", base[0].sup_column / m1}, {"sup_row", base[0].sup_row / m1}};
  if (cfg.phase.dim() == 1) {
    const DiameterReport diam = x_gradient_diameter(cfg.phase, torus_box(cfg.grid));
    result["x_gradient_diameter"] = {{"diameter", diam.diameter}, {"inner", diam.inner_diameter},
                                     {"unbounded", diam.unbounded}};
  }
  if (cfg.doubling && !base.empty()) {
    std::vector<SchurSums> large;
    result["doubled"] = schur_for(cfg.doubled(), large);
    result["growth"] = {{"sup_column", large[0].sup_column / base[0].sup_column},
                        {"sup_row", large[0].sup_row / base[0].sup_row},
                        {"nested_mixed", large[0].nested_mixed / base[0].nested_mixed},
                        {"nested_mixed_adjoint", large[0].nested_mixed_adjoint / base[0].nested_mixed_adjoint}};
    std::printf("nested-sum growth under doubling = %.6f\n", large[0].nested_mixed / base[0].nested_mixed);
  }
  emit(cfg, "schur", result);
  return 0;
}

int cmd_modnorm(const ExperimentConfig& cfg) {
  require_1d(cfg, "modnorm");
  const SampledFunction g = cfg.window();
  CsvTable t;
  t.header = {{"kind", "modnorm_family"}, {"norm", to_json(cfg.norm)}};
  t.columns = {"lambda", "norm"};
  Json family = Json::array();
  for (double lambda : cfg.lambdas) {
    const double v = mod_norm(dilated_gaussian(cfg.grid, lambda), cfg.norm, g, cfg.strides);
    t.rows.push_back({lambda, v});
    family.push_back({{"lambda", lambda}, {"norm", v}});
  }
  emit_table(cfg, "modnorm", std::move(t));
  emit(cfg, "modnorm", {{"norm", to_json(cfg.norm)},
                        {"input_norm", mod_norm(cfg.input(), cfg.norm, g, cfg.strides)},
                        {"family", family}});
  return 0;
}

int cmd_norm_demo(const ExperimentConfig& cfg, const std::string& kind, double expected) {
  require_1d(cfg, kind);
  const NormRatioReport rep =
      operator_norm_experiment(cfg.phase, cfg.symbol, cfg.grid, cfg.norm, cfg.lambdas, cfg.strides);
  CsvTable t;
  t.header = {{"kind", kind}, {"phase", rep.phase}, {"norm", to_json(cfg.norm)}};
  t.columns = {"lambda", "ratio"};
  for (std::size_t i = 0; i < rep.parameters.size(); ++i) t.rows.push_back({rep.parameters[i], rep.ratios[i]});
  const std::string name = kind == "chirp-demo" ? "chirp_demo" : "multiplier_demo";
  emit_table(cfg, name, std::move(t));
  Json result = to_json(rep);
  result["expected_slope"] = expected;
  emit(cfg, name, result);
  std::printf("slope = %.4f (expected %.4f)\n", rep.slope, expected);
  return 0;
}

int cmd_schrodinger(const ExperimentConfig& cfg) {
  const HamiltonianQuadratic h = cfg.hamiltonian();
  if (h.dim() != cfg.grid.dim()) throw ConfigError("Hamiltonian dimension does not match the grid");
  const bool free = (h.H - HamiltonianQuadratic::free_particle(h.dim()).H).cwiseAbs().maxCoeff() == 0.0;
  const SampledFunction u0 = cfg.input();
  CsvTable t;
  t.header = {{"kind", "schrodinger_profile"}, {"hamiltonian", to_json(h)}};
  t.columns = cfg.grid.dim() == 1 ? std::vector<std::string>{"t", "x", "abs"}
                                  : std::vector<std::string>{"t", "x1", "x2", "abs"};
  Json steps = Json::array();
  for (double time : cfg.times()) {
    const SampledFunction u = schrodinger_demo(h, time, u0);
    Json step = {{"t", time},
                 {"phase", to_json(schrodinger_phase(h, time))},
                 {"l2_norm", u.l2_norm()},
                 {"norm_drift", std::abs(u.l2_norm() / u0.l2_norm() - 1.0)},
                 {"periodization_warning", u.periodization_warning}};
    if (free) step["multiplier_difference"] = phase_aligned_difference(u, free_propagator(time, u0));
    steps.push_back(step);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      const Vec x = cfg.grid.point(i);
      std::vector<double> row{time};
      row.insert(row.end(), x.data(), x.data() + x.size());
      row.push_back(std::abs(u.values[i]));
      t.rows.push_back(std::move(row));
    }
  }
  emit_table(cfg, "schrodinger", std::move(t));
  const auto times = cfg.times();
  Json result = {{"hamiltonian", to_json(h)}, {"steps", steps}};
  result["flow"] = Json::array();
  for (double time : times) {
    const PhaseMat s = hamiltonian_flow(h, time);
    Json rows = Json::array();
    for (int i = 0; i < s.rows(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < s.cols(); ++j) row.push_back(s(i, j));
      rows.push_back(row);
    }
    result["flow"].push_back({{"t", time}, {"matrix", rows}});
  }
  emit(cfg, "schrodinger", result);
  return 0;
}

int cmd_selftest(const ExperimentConfig& cfg) {
  SelftestOptions options;
  const Json& st = cfg.raw.at("selftest");
  options.seed = st.value("seed", options.seed);
  if (st.contains("only")) options.only = st["only"].get<std::vector<int>>();
  const auto results = run_selftest(options, [](const CriterionResult& r) {
    std::cout << format_result_line(r) << std::endl;
  });
  Json list = Json::array();
  bool all = true;
  for (const auto& r : results) {
    list.push_back(to_json(r));
    all = all && r.passed;
  }
  emit(cfg, "selftest", {{"passed", all}, {"criteria", list}});
  return all ? 0 : 3;
}

}  // namespace

std::vector<std::string> subcommand_names() {
  return {"stft",      "frame",      "gabor-matrix",    "decay",       "schur",
          "modnorm",   "chirp-demo", "multiplier-demo", "schrodinger", "selftest"};
}

std::string subcommand_description(const std::string& name) {
  static const std::map<std::string, std::string> text = {
      {"stft", "STFT magnitude of the input against the window"},
      {"frame", "frame bounds, dual and tight windows"},
      {"gabor-matrix", "Gabor matrix by both routes and their difference"},
      {"decay", "off-diagonal decay profile and C_N table"},
      {"schur", "Schur-test row, column and nested mixed sums"},
      {"modnorm", "modulation-space norms over the dilated Gaussian family"},
      {"chirp-demo", "norm-ratio slope of the chirp multiplication"},
      {"multiplier-demo", "norm-ratio slope of the Fourier-side chirp"},
      {"schrodinger", "quadratic Schrodinger propagator at the configured times"},
      {"selftest", "run the acceptance suite"}};
  const auto it = text.find(name);
  return it == text.end() ? std::string() : it->second;
}

int run_subcommand(const std::string& name, const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output);
  if (name == "stft") return cmd_stft(cfg);
  if (name == "frame") return cmd_frame(cfg);
  if (name == "gabor-matrix") return cmd_gabor_matrix(cfg);
  if (name == "decay") return cmd_decay(cfg);
  if (name == "schur") return cmd_schur(cfg);
  if (name == "modnorm") return cmd_modnorm(cfg);
  if (name == "chirp-demo") {
    const double p = cfg.norm.p, q = cfg.norm.q;
    const double expected = 0.5 * cfg.grid.dim() * ((std::isinf(p) ? 0.0 : 1.0 / p) - (std::isinf(q) ? 0.0 : 1.0 / q));
    return cmd_norm_demo(cfg, name, expected);
  }
  if (name == "multiplier-demo") return cmd_norm_demo(cfg, name, 0.0);
  if (name == "schrodinger") return cmd_schrodinger(cfg);
  if (name == "selftest") return cmd_selftest(cfg);
  throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace gaborfio::cli
