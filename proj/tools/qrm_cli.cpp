#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qrm/driver.hpp"
#include "qrm/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::vector<int> parse_knots(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw qrm::ConfigError("--knots: '" + item + "' is not an integer");
    }
    if (used != item.size()) throw qrm::ConfigError("--knots: '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw qrm::ConfigError("--knots: empty list");
  return out;
}

void emit_csv(const std::vector<qrm::ConvergenceRow>& rows, const std::string& path, bool timings) {
  if (path.empty()) {
    qrm::write_csv(std::cout, rows, timings);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qrm::ConfigError("cannot write output file '" + path + "'");
  qrm::write_csv(out, rows, timings);
}

int run_presets() {
  for (const auto& p : qrm::preset_registry()) std::cout << p.name << "\t" << p.description << "\n";
  return kExitOk;
}

int run_solve(const std::string& config_path, std::string output, bool timings) {
  const qrm::RunConfig cfg = qrm::load_config(config_path);
  if (output.empty() && cfg.output) output = *cfg.output;
  const qrm::ConvergenceRow row = qrm::measure(cfg);
  std::cerr << "problem " << cfg.problem.name << " (" << qrm::describe(cfg.problem.op) << "), N=" << row.knots
            << ", grid=" << cfg.grid << "\n"
            << "  max_err            " << qrm::format_double(row.max_err) << "\n"
            << "  rms_err            " << qrm::format_double(row.rms_err) << "\n"
            << "  boundary_residual  " << qrm::format_double(row.boundary_residual) << "\n"
            << "  condition_estimate " << qrm::format_double(row.condition_estimate) << "\n";
  emit_csv({row}, output, timings);
  return kExitOk;
}

int run_converge(const std::string& preset, const std::string& knots, const std::string& output, bool timings) {
  const qrm::RunConfig cfg = qrm::default_config(qrm::find_preset(preset));
  const auto rows = qrm::convergence_study(cfg, parse_knots(knots));
  for (const auto& r : rows)
    if (!r.error.empty()) std::cerr << "N=" << r.knots << " failed: " << r.error << "\n";
  emit_csv(rows, output, timings);
  return kExitOk;
}

int run_validate() {
  bool ok = true;
  const auto report = [&](bool pass, const std::string& what) {
    std::cout << (pass ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };
  for (const auto& p : qrm::preset_registry()) {
    const double coarse = qrm::preset_consistency_residual(p, 1e-3);
    const double fine = qrm::preset_consistency_residual(p, 5e-4);
    report(coarse <= 1e-3, "preset " + p.name + " L u* = f residual " + qrm::format_double(coarse) +
                               " (h/2: " + qrm::format_double(fine) + ")");
  }
  const std::vector<qrm::OperatorSpec> ops = {
      qrm::Helmholtz{1.0},           qrm::Helmholtz{2.0},
      qrm::Helmholtz{5.0},           qrm::ModifiedHelmholtz{1.0},
      qrm::ModifiedHelmholtz{3.0},   qrm::ConvectionDiffusion{1.0, {2.0, 0.0}, 0.0},
      qrm::ConvectionDiffusion{1.0, {2.0, 0.0}, 1.0}};
  for (const auto& op : ops) {
    const auto rep = qrm::kernel_annihilation(op, 1e-3);
    const double red = rep.reduction();
    report(red >= 3.5 && red <= 4.5, "kernel " + qrm::describe(op) + " annihilated: rms residual " +
                                         qrm::format_double(rep.rms_coarse) + ", reduction " +
                                         qrm::format_double(red) + " on halving h");
  }
  return ok ? kExitOk : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-RBF elliptic solver: FFT particular solution plus boundary-knot collocation"};
  app.require_subcommand(1);

  std::string config_path, output, preset, knots;
  bool timings = false;

  auto* solve = app.add_subcommand("solve", "Solve one problem described by a JSON config");
  solve->add_option("--config", config_path, "JSON config file")->required();
  solve->add_option("--output", output, "CSV output file (default: stdout)");
  solve->add_flag("--timings", timings, "Write measured stage timings into the CSV");

  auto* converge = app.add_subcommand("converge", "Convergence study over knot counts for a preset");
  converge->add_option("--preset", preset, "Preset name")->required();
  converge->add_option("--knots", knots, "Comma-separated, strictly increasing knot counts")->required();
  converge->add_option("--output", output, "CSV output file (default: stdout)");
  converge->add_flag("--timings", timings, "Write measured stage timings into the CSV");

  auto* presets = app.add_subcommand("presets", "List built-in problems");
  auto* validate = app.add_subcommand("validate", "Check preset consistency and kernel annihilation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*presets) return run_presets();
    if (*validate) return run_validate();
    if (*solve) return run_solve(config_path, output, timings);
    if (*converge) return run_converge(preset, knots, output, timings);
  } catch (const qrm::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const qrm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
