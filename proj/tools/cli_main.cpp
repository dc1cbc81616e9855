#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "equiaff/labels.hpp"
#include "equiaff/report.hpp"

namespace {

void add_run_options(CLI::App* cmd, equiaff::RunConfig& cfg, std::string& backend) {
  cmd->add_option("--backend", backend, "derivative backend (default: per chart)")
      ->check(CLI::IsMember({"jets", "fd"}));
  cmd->add_option("--tol", cfg.tolerance,
                  "check tolerance (default: 1e-6 jets, 1e-3 fd)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--points", cfg.points, "sample points per model")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "sample seed")->capture_default_str();
  cmd->add_flag("--long", cfg.long_running, "allow long-running models");
  cmd->add_option("--out", cfg.output_path, "write the report here instead of stdout");
  cmd->add_flag("--timing", cfg.timing, "include wall-clock fields in the report");
  cmd->add_option("--workers", cfg.workers, "concurrent point evaluations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

int emit(const nlohmann::ordered_json& report, const std::string& path) {
  std::string text = report.dump(2);
  text += '\n';
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output file '" << path << "'\n";
      return 2;
    }
    out << text;
  }
  return equiaff::report_passed(report) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equiaffine invariants of hypersurface charts"};
  app.require_subcommand(1);

  equiaff::RunConfig cfg;
  std::string backend;
  std::string spec_path;

  CLI::App* verify = app.add_subcommand("verify", "run the invariant pipeline on models");
  verify->add_option("labels", cfg.model_labels, "model labels (see: list)")->required();
  add_run_options(verify, cfg, backend);

  CLI::App* calabi =
      app.add_subcommand("calabi", "build and audit a composition from a spec file");
  calabi->add_option("spec", spec_path, "spec file with keys r, s, factors, c")->required();
  add_run_options(calabi, cfg, backend);

  CLI::App* list = app.add_subcommand("list", "print the model catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!backend.empty()) {
    cfg.backend_forced = true;
    cfg.backend =
        backend == "jets" ? equiaff::DerivBackend::Jets : equiaff::DerivBackend::FiniteDifference;
  }

  if (list->parsed()) {
    std::cout << equiaff::catalog_text();
    return 0;
  }

  try {
    if (verify->parsed()) return emit(equiaff::verify_report(cfg), cfg.output_path);
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read spec file '" << spec_path << "'\n";
      return 2;
    }
    nlohmann::json doc = nlohmann::json::parse(in);
    return emit(equiaff::calabi_report(doc, cfg), cfg.output_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
