#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "funcrate/config.hpp"
#include "funcrate/report.hpp"
#include "funcrate/runner.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

std::string resolve_output(const std::string& configured, const std::string& out_dir,
                           const std::string& stem, const char* ext) {
  fs::path p = configured.empty() ? fs::path(stem + ext) : fs::path(configured);
  if (!out_dir.empty()) p = fs::path(out_dir) / p.filename();
  return p.string();
}

int cmd_validate(const std::string& config_path) {
  funcrate::ConfigResult result = funcrate::parse_config_file(config_path);
  if (!result.ok()) {
    std::cerr << "invalid config (" << result.violations.size() << " violation(s)):\n";
    for (const auto& v : result.violations) std::cerr << "  - " << v << "\n";
    return kExitInvalid;
  }
  std::cout << "OK\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  funcrate::ConfigResult result = funcrate::parse_config_file(config_path);
  if (!result.ok()) {
    std::cerr << "invalid config (" << result.violations.size() << " violation(s)):\n";
    for (const auto& v : result.violations) std::cerr << "  - " << v << "\n";
    return kExitInvalid;
  }
  const funcrate::ExperimentConfig& cfg = *result.config;
  funcrate::Report report = funcrate::run_experiment(cfg);

  std::string stem = fs::path(config_path).stem().string();
  std::string csv = resolve_output(cfg.out_csv, out_dir, stem, ".csv");
  std::string json = resolve_output(cfg.out_json, out_dir, stem, ".json");
  std::string svg = resolve_output(cfg.out_svg, out_dir, stem, ".svg");
  funcrate::emit_csv(report, csv);
  funcrate::emit_json(report, json);
  funcrate::emit_svg(report, svg);

  std::cout << "wrote " << csv << ", " << json << ", " << svg << "\n";
  if (report.strong_fit) {
    std::printf("strong fit slope %.4f (R^2 %.4f, %s)\n", report.strong_fit->slope,
                report.strong_fit->r_squared,
                funcrate::abscissa_mode_name(report.strong_fit->mode).c_str());
  }
  std::printf("thm 2.1 calibration C = %.6g, prop 2.1 headroom = %.4f\n",
              report.thm1_calibration, report.prop21_headroom);
  std::printf("%.2f s wall, %.0f replicates/s\n", report.timing.wall_seconds,
              report.timing.replicates_per_second);
  return kExitOk;
}

int cmd_plot(const std::string& report_path, const std::string& out_dir) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "cannot open report '" << report_path << "'\n";
    return kExitInvalid;
  }
  nlohmann::json j;
  in >> j;
  funcrate::Report report = funcrate::report_from_json(j);
  fs::path svg_path = fs::path(report_path).replace_extension(".svg");
  if (!out_dir.empty()) svg_path = fs::path(out_dir) / svg_path.filename();
  funcrate::emit_svg(report, svg_path.string());
  std::cout << "wrote " << svg_path.string() << "\n";
  return kExitOk;
}

int cmd_verify_kernels(const std::string& config_path) {
  funcrate::ConfigResult result = funcrate::parse_config_file(config_path);
  if (!result.ok()) {
    std::cerr << "invalid config (" << result.violations.size() << " violation(s)):\n";
    for (const auto& v : result.violations) std::cerr << "  - " << v << "\n";
    return kExitInvalid;
  }
  const funcrate::ExperimentConfig& cfg = *result.config;
  funcrate::StableIndex alpha(funcrate::scaling_alpha(cfg.process));
  funcrate::TransitionDensity td = funcrate::density_for(cfg.process);
  funcrate::EvalGrid grid = funcrate::default_eval_grid(cfg.horizon_T, alpha);

  double c_density = funcrate::verify_density_bound(td, cfg.Q, alpha, cfg.horizon_T, grid);
  double c_derivative = funcrate::verify_derivative_bound(td, cfg.Q, alpha, cfg.horizon_T, grid);
  funcrate::IntegrabilityVerdict verdict =
      funcrate::check_integrability(cfg.Q, cfg.V, cfg.p, cfg.horizon_T, alpha);
  std::printf("density bound constant    C_T  = %.6g (grid supremum)\n", c_density);
  std::printf("derivative bound constant C_T' = %.6g (grid supremum)\n", c_derivative);
  std::printf("integrability (p = %g): %s -- %s\n", cfg.p, verdict.ok ? "accept" : "reject",
              verdict.reason.c_str());
  if (verdict.ok) {
    std::printf("int Q V^1  = %.9g\n",
                funcrate::qv_integral(cfg.Q, cfg.V, cfg.horizon_T, alpha, 1.0));
    std::printf("int Q V^p  = %.9g\n",
                funcrate::qv_integral(cfg.Q, cfg.V, cfg.horizon_T, alpha, cfg.p));
  }
  bool finite = std::isfinite(c_density) && std::isfinite(c_derivative);
  std::printf("bound certification: %s\n", finite ? "PASS" : "FAIL");
  return finite ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"funcrate: Monte Carlo rate laboratory for Riemann-sum approximation of "
               "integral functionals of Markov processes"};
  app.require_subcommand(1);

  std::string config_path, report_path, out_dir;

  CLI::App* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", config_path, "config file")->required();

  CLI::App* run = app.add_subcommand("run", "run an experiment and emit CSV/JSON/SVG");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out-dir", out_dir, "directory overriding output locations");

  CLI::App* plot = app.add_subcommand("plot", "re-render the SVG from a JSON report");
  plot->add_option("report", report_path, "report.json produced by run")->required();
  plot->add_option("--out-dir", out_dir, "directory overriding the output location");

  CLI::App* verify = app.add_subcommand("verify-kernels", "run the kernel bound suite");
  verify->add_option("config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (plot->parsed()) return cmd_plot(report_path, out_dir);
    if (verify->parsed()) return cmd_verify_kernels(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitInvalid;
}
