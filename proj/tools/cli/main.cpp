// wue-harness: run, list and template the verification experiments.
//
//   wue-harness list
//   wue-harness show-config <experiment>
//   wue-harness run --config <path> [--out <dir>] [--format json|csv] [--tolerance-scale <r>]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 configuration or runtime error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "wue/error.hpp"
#include "wue/harness/experiments.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

int do_list() {
  for (const auto& e : wue::harness::catalog()) {
    std::cout << e.name << "\n    " << e.description << "\n    anchor: " << e.anchor << "\n";
  }
  return kPass;
}

int do_show(const std::string& name) {
  std::cout << wue::harness::render_template(wue::harness::find_experiment(name).schema);
  return kPass;
}

int do_run(const std::string& path, const std::string& out, const std::string& format, double scale) {
  using namespace wue::harness;
  ExperimentConfig cfg = load_config(path);
  if (!out.empty()) cfg.set("output.dir", out);
  if (!format.empty()) {
    if (format != "json" && format != "csv") throw wue::ConfigError("--format must be json or csv");
    cfg.set("output.format", format);
  }
  const Report report = run_experiment(cfg, scale);
  const auto files = write_report(report, cfg.string("output.dir"), cfg.string("output.format"));

  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.passed ? 1 : 0;
  std::cout << report.experiment << ": " << passed << "/" << report.checks.size() << " checks passed (hbar = "
            << cfg.hbar() << ")\n";
  for (const auto* c : report.failures()) std::cout << "  FAIL " << c->name << ": " << c->detail << "\n";
  for (const auto& w : report.warnings) std::cout << "  warning: " << w << "\n";
  for (const auto& f : files) std::cout << "  wrote " << f.string() << "\n";
  return report.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification experiments for Weyl-type quantization on curved and compact configuration spaces"};
  app.require_subcommand(1);

  app.add_subcommand("list", "list the experiments with their anchors");

  auto* show = app.add_subcommand("show-config", "print a commented configuration template");
  std::string show_name;
  show->add_option("experiment", show_name, "experiment name")->required();

  auto* run = app.add_subcommand("run", "run one experiment and write its report");
  std::string config, out, format;
  double scale = 1.0;
  run->add_option("--config", config, "experiment configuration (JSON, // comments allowed)")->required();
  run->add_option("--out", out, "output directory (overrides output.dir)");
  run->add_option("--format", format, "json or csv (overrides output.format)");
  run->add_option("--tolerance-scale", scale, "multiplies every bounded tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  }

  try {
    if (app.got_subcommand("list")) return do_list();
    if (app.got_subcommand("show-config")) return do_show(show_name);
    return do_run(config, out, format, scale);
  } catch (const wue::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const wue::harness::CheckError& e) {
    std::cerr << "runtime error in " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
