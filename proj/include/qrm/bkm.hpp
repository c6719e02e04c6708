#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qrm/dense.hpp"
#include "qrm/geometry.hpp"
#include "qrm/operators.hpp"

namespace qrm {

struct Dirichlet {
  double g = 0.0;
};

struct Neumann {
  double h = 0.0;
};

using BoundaryCondition = std::variant<Dirichlet, Neumann>;

/// Circular-harmonic basis {1, (rho/R)^m cos m theta, (rho/R)^m sin m theta},
/// m = 1..order, about `center` with scale R.
struct TrefftzBasis {
  int order = 12;
  Point2 center;
  double scale = 1.0;

  int size() const { return 2 * order + 1; }
  /// Value of basis term `index` at x.
  double value(int index, Point2 x) const;
  Point2 gradient(int index, Point2 x) const;
};

/// Center and scale taken from the domain: its center and its largest radius.
TrefftzBasis trefftz_for(const StarDomain& domain, int order);

struct KernelMode {
  OperatorSpec op;
};

using CollocationMode = std::variant<KernelMode, TrefftzBasis>;

struct CollocationSystem {
  Matrix matrix;
  std::vector<double> rhs;
  /// Kernel centers; empty in Trefftz mode.
  std::vector<BoundaryNode> centers;
  CollocationMode mode;
};

/// TSVD is the default: kernel matrices pass a condition number of 1e17 by
/// about 24 knots, after which LU solutions lose all accuracy.
struct SolverStrategy {
  enum class Kind { lu, tsvd };
  Kind kind = Kind::tsvd;
  double cutoff = 1e-12;
};

std::string to_string(SolverStrategy::Kind kind);

struct SolveDiagnostics {
  /// sigma_max / sigma_min from the SVD; NaN when the system is too large
  /// (more than 512 rows) for the diagnostic SVD under LU.
  double condition_estimate = 0.0;
  int effective_rank = 0;
  double residual_norm = 0.0;
  SolverStrategy::Kind strategy_used = SolverStrategy::Kind::lu;
};

inline constexpr std::size_t kDiagnosticSvdLimit = 512;

struct HomogeneousSolution {
  CollocationMode mode;
  std::vector<double> coefficients;
  std::vector<BoundaryNode> centers;
};

/// Builds the collocation system. Kernel mode places one center on every
/// node; Poisson requires a Trefftz basis with size() <= node count. Other
/// operators ignore `trefftz`.
CollocationSystem assemble(const OperatorSpec& op, const std::vector<BoundaryNode>& nodes,
                           const std::vector<BoundaryCondition>& bc,
                           const std::optional<TrefftzBasis>& trefftz = std::nullopt);

std::pair<std::vector<double>, SolveDiagnostics> solve_dense(const CollocationSystem& system,
                                                             const SolverStrategy& strategy);

HomogeneousSolution make_solution(const CollocationSystem& system, std::vector<double> coefficients);

double eval_homogeneous(const HomogeneousSolution& sol, Point2 x);
Point2 eval_homogeneous_gradient(const HomogeneousSolution& sol, Point2 x);

}  // namespace qrm
