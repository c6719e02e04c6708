#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qrm/bkm.hpp"
#include "qrm/geometry.hpp"
#include "qrm/operators.hpp"
#include "qrm/particular.hpp"

namespace qrm {

/// Analytic field with closed-form gradient and Laplacian, so L u can be
/// formed for any operator.
struct ManufacturedField {
  std::string name;
  std::function<double(Point2)> value;
  std::function<Point2(Point2)> gradient;
  std::function<double(Point2)> laplacian;
};

/// Built-in manufactured fields: sin2x1, sinpi_sinpi, exp_x1, cos_x1,
/// j0_trace (J0(2 |x - (1,0)|)).
ManufacturedField manufactured_field(const std::string& name);
std::vector<std::string> manufactured_field_names();

/// f = L u for an analytic u.
ScalarField source_from_exact(const OperatorSpec& op, const ManufacturedField& exact);

enum class BcKind { dirichlet, neumann };

struct ProblemPreset {
  std::string name;
  std::string description;
  OperatorSpec op;
  StarDomain domain;
  std::optional<ManufacturedField> exact;
  ScalarField source;
  /// Source is identically zero; the particular stage is skipped.
  bool homogeneous = false;
  BcKind bc_kind = BcKind::dirichlet;
  int trefftz_order = 12;
};

/// Registry of manufactured-solution problems. Every preset is checked for
/// L u* = f by finite differences when the registry is first built.
const std::vector<ProblemPreset>& preset_registry();
const ProblemPreset& find_preset(const std::string& name);

/// Largest |L_h u* - f| over the probe points, with L_h the 5-point operator.
double preset_consistency_residual(const ProblemPreset& preset, double h);

struct RunConfig {
  ProblemPreset problem;
  int knots = 32;
  int grid = 128;
  double box_margin = 0.5;
  TaperSpec taper;
  SolverStrategy strategy;
  int trefftz_order = 12;
  int rings = 4;
  int per_ring = 50;
  std::optional<std::string> output;
};

RunConfig default_config(const ProblemPreset& preset);
/// Re-checks every module precondition; throws ConfigError with the fix.
void validate(const RunConfig& config);

/// u = u_p + u_h.
struct SolutionField {
  std::optional<SpectralField> particular;
  HomogeneousSolution homogeneous;

  double evaluate(Point2 x) const;
  Point2 gradient(Point2 x) const;
};

struct StageTimings {
  double particular_ms = 0.0;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
};

struct SolveOutcome {
  SolutionField field;
  SolveDiagnostics diagnostics;
  StageTimings timings;
};

/// Particular solve on the embedding box, boundary data adjustment,
/// collocation solve. Errors are rethrown with the failing stage named.
SolveOutcome solve_problem(const RunConfig& config);

struct ErrorMetrics {
  double max_err = 0.0;
  double rms_err = 0.0;
};

/// Errors relative to max |exact| over the points.
ErrorMetrics error_metrics(const std::function<double(Point2)>& field,
                           const std::function<double(Point2)>& exact, const std::vector<Point2>& points);

double residual_check(const std::function<double(Point2)>& field, const OperatorSpec& op,
                      const ScalarField& source, const std::vector<Point2>& points, double h);

/// Largest boundary-condition mismatch at the off-knot samples for `knots`.
double boundary_residual(const SolutionField& field, const ProblemPreset& problem, int knots);

struct ConvergenceRow {
  int knots = 0;
  double max_err = 0.0;
  double rms_err = 0.0;
  double boundary_residual = 0.0;
  double condition_estimate = 0.0;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
  double particular_ms = 0.0;
  /// Empty on success; otherwise the failure message and all metrics NaN.
  std::string error;
};

/// Runs solve_problem and measures the row for config.knots.
ConvergenceRow measure(const RunConfig& config);

/// One row per knot count; failures are recorded in-row.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config, const std::vector<int>& knot_counts);

inline constexpr const char* kCsvHeader =
    "N,max_err,rms_err,boundary_residual,condition_estimate,assemble_ms,solve_ms,particular_ms";

/// Shortest round-trip scientific notation.
std::string format_double(double v);

/// Timing columns are written as 0 unless `with_timings`; wall-clock values
/// would make repeated runs differ.
void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, bool with_timings);

/// Parses the JSON config text. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

struct AnnihilationReport {
  double rms_coarse = 0.0;  ///< RMS |L_h phi| at h
  double rms_fine = 0.0;    ///< RMS |L_h phi| at h / 2
  double max_coarse = 0.0;
  double max_fine = 0.0;
  double reduction() const { return rms_coarse / rms_fine; }
};

/// FD residual of the kernel at `count` pseudo-random displacements with
/// 0.05 <= |d| <= 2 (radius and angle uniform), fixed seed.
AnnihilationReport kernel_annihilation(const OperatorSpec& op, double h, int count = 50,
                                       unsigned long long seed = 20261016ULL);

}  // namespace qrm
