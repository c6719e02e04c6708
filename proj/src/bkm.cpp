#include "qrm/bkm.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "qrm/errors.hpp"

namespace qrm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// z^m for z = (x - center) / R, computed by repeated multiplication so the
// m = 0 term is exactly one.
std::complex<double> scaled_power(const TrefftzBasis& b, Point2 x, int m) {
  const std::complex<double> z((x.x1 - b.center.x1) / b.scale, (x.x2 - b.center.x2) / b.scale);
  std::complex<double> out = 1.0;
  for (int k = 0; k < m; ++k) out *= z;
  return out;
}

double row_value(const CollocationMode& mode, const BoundaryNode& node, const BoundaryCondition& bc,
                 const std::vector<BoundaryNode>& centers, std::size_t j) {
  const bool neumann = std::holds_alternative<Neumann>(bc);
  return std::visit(Overloaded{
                        [&](const KernelMode& k) {
                          const Point2 d = node.position - centers[j].position;
                          return neumann ? dot(node.normal, kernel_gradient(k.op, d))
                                         : kernel_value(k.op, d);
                        },
                        [&](const TrefftzBasis& b) {
                          const int idx = static_cast<int>(j);
                          return neumann ? dot(node.normal, b.gradient(idx, node.position))
                                         : b.value(idx, node.position);
                        },
                    },
                    mode);
}

}  // namespace

double TrefftzBasis::value(int index, Point2 x) const {
  if (index == 0) return 1.0;
  const int m = (index + 1) / 2;
  const std::complex<double> zm = scaled_power(*this, x, m);
  return index % 2 == 1 ? zm.real() : zm.imag();
}

Point2 TrefftzBasis::gradient(int index, Point2 x) const {
  if (index == 0) return {0.0, 0.0};
  const int m = (index + 1) / 2;
  // d/dx1 z^m = m z^(m-1) / R and d/dx2 z^m = i m z^(m-1) / R.
  const std::complex<double> dz = static_cast<double>(m) * scaled_power(*this, x, m - 1) / scale;
  if (index % 2 == 1) return {dz.real(), -dz.imag()};
  return {dz.imag(), dz.real()};
}

TrefftzBasis trefftz_for(const StarDomain& domain, int order) {
  return TrefftzBasis{order, domain.center, domain.max_radius()};
}

std::string to_string(SolverStrategy::Kind kind) {
  return kind == SolverStrategy::Kind::lu ? "lu" : "tsvd";
}

CollocationSystem assemble(const OperatorSpec& op, const std::vector<BoundaryNode>& nodes,
                           const std::vector<BoundaryCondition>& bc,
                           const std::optional<TrefftzBasis>& trefftz) {
  validate(op);
  if (nodes.empty()) throw ConfigError("assemble: need at least one boundary node");
  if (nodes.size() != bc.size())
    throw ConfigError("assemble: " + std::to_string(nodes.size()) + " nodes but " +
                      std::to_string(bc.size()) + " boundary conditions");

  CollocationSystem sys;
  const std::size_t rows = nodes.size();
  std::size_t cols = rows;
  if (std::holds_alternative<Poisson>(op)) {
    if (!trefftz) throw ConfigError("poisson requires a trefftz_order");
    if (trefftz->order < 0) throw ConfigError("trefftz_order must be non-negative");
    if (!(trefftz->scale > 0.0)) throw ConfigError("trefftz scale must be positive");
    cols = static_cast<std::size_t>(trefftz->size());
    if (cols > rows)
      throw ConfigError("trefftz_order " + std::to_string(trefftz->order) + " needs " +
                        std::to_string(cols) + " columns but only " + std::to_string(rows) +
                        " knots are available");
    sys.mode = *trefftz;
  } else {
    sys.mode = KernelMode{op};
    sys.centers = nodes;
  }

  sys.matrix = Matrix(rows, cols);
  sys.rhs.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    sys.rhs[i] = std::visit(Overloaded{[](const Dirichlet& d) { return d.g; },
                                       [](const Neumann& n) { return n.h; }},
                            bc[i]);
    if (!std::isfinite(sys.rhs[i])) throw ConfigError("assemble: non-finite boundary value");
    for (std::size_t j = 0; j < cols; ++j) sys.matrix(i, j) = row_value(sys.mode, nodes[i], bc[i], sys.centers, j);
  }
  return sys;
}

std::pair<std::vector<double>, SolveDiagnostics> solve_dense(const CollocationSystem& system,
                                                             const SolverStrategy& strategy) {
  const Matrix& a = system.matrix;
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  if (n < m) throw ConfigError("solve_dense: system has fewer rows than columns");
  if (!(strategy.cutoff >= 0.0) || !std::isfinite(strategy.cutoff))
    throw ConfigError("solve_dense: svd cutoff must be finite and non-negative");

  SolveDiagnostics diag;
  diag.strategy_used = strategy.kind;
  std::vector<double> x;
  std::optional<Svd> svd;
  if (strategy.kind == SolverStrategy::Kind::tsvd || n <= kDiagnosticSvdLimit) svd = jacobi_svd(a);

  if (strategy.kind == SolverStrategy::Kind::lu) {
    if (n != m)
      throw ConfigError("solve_dense: lu needs a square system (" + std::to_string(n) + "x" +
                        std::to_string(m) + "); use tsvd");
    x = lu_solve(lu_factor(a), system.rhs);
    if (svd) {
      const double smax = svd->sigma.front();
      int rank = 0;
      for (double s : svd->sigma)
        if (s > SolverStrategy{}.cutoff * smax) ++rank;
      diag.effective_rank = rank;
    } else {
      diag.effective_rank = static_cast<int>(m);
    }
  } else {
    x = svd_solve(*svd, system.rhs, strategy.cutoff, &diag.effective_rank);
  }

  if (svd) {
    const double smin = svd->sigma.back();
    diag.condition_estimate = smin > 0.0 ? svd->sigma.front() / smin : std::numeric_limits<double>::infinity();
  } else {
    diag.condition_estimate = std::numeric_limits<double>::quiet_NaN();
  }
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < n; ++i) r[i] -= system.rhs[i];
  diag.residual_norm = norm2(r);
  return {std::move(x), diag};
}

HomogeneousSolution make_solution(const CollocationSystem& system, std::vector<double> coefficients) {
  if (coefficients.size() != system.matrix.cols())
    throw ConfigError("make_solution: coefficient count does not match the basis size");
  for (double c : coefficients)
    if (!std::isfinite(c)) throw NumericalError("homogeneous solve produced non-finite coefficients");
  return {system.mode, std::move(coefficients), system.centers};
}

double eval_homogeneous(const HomogeneousSolution& sol, Point2 x) {
  return std::visit(Overloaded{
                        [&](const KernelMode& k) {
                          // Coefficients from ill-conditioned systems reach 1e7 against an O(1)
                          // field; rounding each term to double would leave noise that finite
                          // differences amplify by 1/h^2.
                          long double s = 0.0L;
                          for (std::size_t j = 0; j < sol.coefficients.size(); ++j) {
                            const Point2 c = sol.centers[j].position;
                            s += sol.coefficients[j] * kernel_value_wide(k.op, static_cast<long double>(x.x1) - c.x1,
                                                                         static_cast<long double>(x.x2) - c.x2);
                          }
                          return static_cast<double>(s);
                        },
                        [&](const TrefftzBasis& b) {
                          double s = 0.0;
                          for (std::size_t j = 0; j < sol.coefficients.size(); ++j)
                            s += sol.coefficients[j] * b.value(static_cast<int>(j), x);
                          return s;
                        },
                    },
                    sol.mode);
}

Point2 eval_homogeneous_gradient(const HomogeneousSolution& sol, Point2 x) {
  return std::visit(Overloaded{
                        [&](const KernelMode& k) {
                          Point2 g;
                          for (std::size_t j = 0; j < sol.coefficients.size(); ++j)
                            g = g + sol.coefficients[j] * kernel_gradient(k.op, x - sol.centers[j].position);
                          return g;
                        },
                        [&](const TrefftzBasis& b) {
                          Point2 g;
                          for (std::size_t j = 0; j < sol.coefficients.size(); ++j)
                            g = g + sol.coefficients[j] * b.gradient(static_cast<int>(j), x);
                          return g;
                        },
                    },
                    sol.mode);
}

}  // namespace qrm
