// gaborfio command-line front end: one subcommand per experiment, a JSON
// config file for parameters, flags that override individual fields.
#include <iostream>
#include <optional>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "commands.hpp"
#include "config.hpp"
#include "gaborfio/error.hpp"
#include "gaborfio/version.hpp"

namespace {

using gaborfio::Json;

struct Overrides {
  std::string config;
  std::optional<std::string> output;
  std::optional<int> d;
  std::optional<double> L;
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> phase;
  std::optional<std::string> symbol;
  std::optional<std::string> p;
  std::optional<std::string> q;
  std::optional<double> s;
  std::optional<double> epsilon;
};

void add_common_options(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  sub->add_option("-o,--output", o.output, "output directory");
  sub->add_option("--d", o.d, "dimension");
  sub->add_option("--L", o.L, "period length");
  sub->add_option("--n", o.n, "samples per axis");
  sub->add_option("--alpha", o.alpha, "lattice time step");
  sub->add_option("--beta", o.beta, "lattice frequency step");
  sub->add_option("--phase", o.phase, "catalog phase name");
  sub->add_option("--symbol", o.symbol, "catalog symbol name");
  sub->add_option("--p", o.p, "inner exponent (number or inf)");
  sub->add_option("--q", o.q, "outer exponent (number or inf)");
  sub->add_option("--s", o.s, "weight exponent");
  sub->add_option("--epsilon", o.epsilon, "relative matrix threshold");
}

Json exponent(const std::string& v) {
  if (v == "inf" || v == "infinity") return "inf";
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw gaborfio::ConfigError("exponent '" + v + "' is not a number");
  }
}

Json merged_config(const std::string& subcommand, const Overrides& o) {
  Json cfg = gaborfio::cli::default_config();
  cfg.merge_patch(gaborfio::cli::subcommand_defaults(subcommand));
  if (!o.config.empty()) cfg.merge_patch(gaborfio::read_json(o.config));
  if (o.output) cfg["output"] = *o.output;
  if (o.d) cfg["grid"]["d"] = *o.d;
  if (o.L) cfg["grid"]["L"] = *o.L;
  if (o.n) cfg["grid"]["n"] = *o.n;
  if (o.alpha) cfg["lattice"]["alpha"] = *o.alpha;
  if (o.beta) cfg["lattice"]["beta"] = *o.beta;
  if (o.phase) cfg["phase"] = {{"name", *o.phase}, {"params", Json::object()}};
  if (o.symbol) cfg["symbol"] = {{"name", *o.symbol}, {"params", Json::object()}};
  if (o.p) cfg["norm"]["p"] = exponent(*o.p);
  if (o.q) cfg["norm"]["q"] = exponent(*o.q);
  if (o.s) cfg["norm"]["s"] = *o.s;
  if (o.epsilon) cfg["epsilon"] = *o.epsilon;
  return cfg;
}

int fail(const char* type, const std::string& message, int code) {
  std::cerr << Json{{"error", type}, {"message", message}, {"exit_code", code}}.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor-matrix discretization of Fourier integral operators"};
  app.set_version_flag("--version", std::string(gaborfio::kVersion) + " (" + gaborfio::kGitRevision + ")");
  app.require_subcommand(1);
  Overrides overrides;
  for (const auto& name : gaborfio::cli::subcommand_names()) add_common_options(app.add_subcommand(name, gaborfio::cli::subcommand_description(name)), overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("UsageError", e.what(), 2);
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    const auto cfg = gaborfio::cli::ExperimentConfig::parse(merged_config(subcommand, overrides));
    return gaborfio::cli::run_subcommand(subcommand, cfg);
  } catch (const gaborfio::CausticError& e) {
    return fail("CausticError", e.what(), 4);
  } catch (const gaborfio::ConfigError& e) {
    return fail("ConfigError", e.what(), 2);
  } catch (const gaborfio::ContractError& e) {
    return fail("ContractError", e.what(), 2);
  } catch (const gaborfio::NotAFrameError& e) {
    return fail("NotAFrameError", e.what(), 3);
  } catch (const gaborfio::AliasingError& e) {
    return fail("AliasingError", e.what(), 3);
  } catch (const gaborfio::ConditionViolation& e) {
    return fail("ConditionViolation", e.what(), 3);
  } catch (const gaborfio::Error& e) {
    return fail("NumericalError", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what(), 3);
  }
}
