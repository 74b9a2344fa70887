#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "minkperi/harness.hpp"

namespace h = minkperi::harness;

namespace {

template <class T>
void add_optional(CLI::App& app, const std::string& name, std::optional<T>& target,
                  const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

void add_common(CLI::App& app, h::RunOptions& opts) {
  add_optional(app, "--config", opts.config, "JSON config file");
  add_optional(app, "--seed", opts.seed, "RNG seed");
  add_optional(app, "--out", opts.out, "Output directory");
  add_optional(app, "--trials", opts.trials, "Number of shapes per suite");
  add_optional(app, "--h", opts.h, "Grid spacing");
  add_optional(app, "--r", opts.r, "Minkowski radius");
  add_optional(app, "--alpha", opts.alpha, "Riesz exponent");
  add_optional(app, "--m", opts.m, "Volume");
  add_optional(app, "--mode", opts.mode, "Sweep mode: small or large");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski r-perimeter and Riesz energy toolkit"};
  app.set_version_flag("--version", h::tool_version());
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  h::RunOptions opts;
  std::string shape;
  std::string suite;

  auto* measure = app.add_subcommand("measure", "Measure a polygon (JSON) or grid (PGM)");
  measure->add_option("shape", shape, "Shape file")->required();
  add_common(*measure, opts);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "iso, bm, bounds, cylinder or potential-gap")->required();
  add_common(*verify, opts);

  auto* optimize = app.add_subcommand("optimize", "Minimize the liquid-drop energy");
  add_common(*optimize, opts);

  auto* sweep = app.add_subcommand("sweep", "Optimize over a list of volumes");
  add_common(*sweep, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? h::kExitOk : h::kExitInvalidInput;
  }

  if (*measure) return h::cmd_measure(shape, opts, std::cout, std::cerr);
  if (*verify) return h::cmd_verify(suite, opts, std::cout, std::cerr);
  if (*optimize) return h::cmd_optimize(opts, std::cout, std::cerr);
  return h::cmd_sweep(opts, std::cout, std::cerr);
}
