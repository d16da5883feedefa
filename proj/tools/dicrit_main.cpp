#include <CLI11.hpp>
#include <iostream>

#include "dicrit/report.hpp"

using namespace dicrit;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string json_path;
  int order = -1;
  double tol = -1.0;
  bool force_exact = false;
  bool force_float = false;
};

AnalysisConfig load(const GlobalOpts& g) {
  AnalysisConfig cfg = load_analysis_config(g.config_path);
  if (g.order > 0) cfg.order = g.order;
  if (g.tol > 0) cfg.tol_hold = g.tol;
  if (g.force_exact) cfg.exact = true;
  if (g.force_float) cfg.exact = false;
  return cfg;
}

void emit(const RunResult& r, const GlobalOpts& g) {
  std::string text = r.report.dump(2);
  if (g.json_path.empty() || g.json_path == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream out(g.json_path);
    out << text << "\n";
    // short human summary
    if (r.report.contains("checks")) {
      for (const auto& [name, v] : r.report["checks"].items())
        std::cout << name << ": " << v["outcome"].get<std::string>() << "\n";
    }
  }
}

void add_global(CLI::App* cmd, GlobalOpts& g) {
  cmd->add_option("config", g.config_path, "analysis configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--json", g.json_path, "write the JSON report to this path ('-' = stdout)");
  cmd->add_option("--order", g.order, "truncation order override");
  cmd->add_option("--tol", g.tol, "holds-threshold override");
  cmd->add_flag("--exact", g.force_exact, "require exact coefficient mode");
  cmd->add_flag("--float", g.force_float, "force floating coefficient mode");
}

int dispatch(const std::function<RunResult(const AnalysisConfig&)>& fn,
             const GlobalOpts& g) {
  try {
    AnalysisConfig cfg = load(g);
    RunResult r = fn(cfg);
    emit(r, g);
    return r.exit_code;
  } catch (const ConfigError& e) {
    Json err;
    err["error"] = "config";
    err["detail"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    Json err;
    err["error"] = "numeric";
    err["detail"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis pipeline for cuspidal nilpotent holomorphic foliations"};
  app.require_subcommand(1);

  GlobalOpts g;
  int steps = -1;

  CLI::App* analyze = app.add_subcommand("analyze", "run the full analysis pipeline");
  add_global(analyze, g);
  CLI::App* blowup = app.add_subcommand("blowup", "print blow-up transforms");
  add_global(blowup, g);
  blowup->add_option("--steps", steps, "number of blow-up steps (default: full chain)");
  CLI::App* classify = app.add_subcommand("classify", "classify the singular points");
  add_global(classify, g);
  CLI::App* holonomy = app.add_subcommand("holonomy", "compute holonomy generators");
  add_global(holonomy, g);
  CLI::App* section = app.add_subcommand("section", "construct the dicriticalness section");
  add_global(section, g);
  CLI::App* verify = app.add_subcommand("verify-integral",
                                        "verify a candidate first integral");
  add_global(verify, g);

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) return dispatch(run_analyze, g);
  if (blowup->parsed())
    return dispatch([&](const AnalysisConfig& c) { return run_blowup(c, steps); }, g);
  if (classify->parsed()) return dispatch(run_classify, g);
  if (holonomy->parsed()) return dispatch(run_holonomy, g);
  if (section->parsed()) return dispatch(run_section, g);
  if (verify->parsed()) return dispatch(run_verify_integral, g);
  return 1;
}
