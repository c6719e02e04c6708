#include "qrm/driver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "qrm/errors.hpp"
#include "qrm/specfun.hpp"

namespace qrm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConsistencyStep = 1e-3;
constexpr double kConsistencyTolerance = 1e-3;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Rethrows the active qrm error with `stage` prefixed, keeping its type.
template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  const auto msg = [stage](const std::exception& e) { return std::string(stage) + " stage: " + e.what(); };
  try {
    return fn();
  } catch (const ResonantBoxError& e) {
    throw ResonantBoxError(msg(e));
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(msg(e));
  } catch (const OverflowError& e) {
    throw OverflowError(msg(e));
  } catch (const NumericalError& e) {
    throw NumericalError(msg(e));
  } catch (const UnsupportedOperatorError& e) {
    throw UnsupportedOperatorError(msg(e));
  } catch (const ConfigError& e) {
    throw ConfigError(msg(e));
  } catch (const DomainError& e) {
    throw DomainError(msg(e));
  }
}

ProblemPreset make_preset(std::string name, std::string description, OperatorSpec op, StarDomain domain,
                          const std::string& exact_name, bool homogeneous, BcKind bc_kind = BcKind::dirichlet) {
  ProblemPreset p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.op = op;
  p.domain = domain;
  p.exact = manufactured_field(exact_name);
  p.source = homogeneous ? ScalarField([](Point2) { return 0.0; }) : source_from_exact(op, *p.exact);
  p.homogeneous = homogeneous;
  p.bc_kind = bc_kind;
  return p;
}

std::vector<ProblemPreset> build_registry() {
  const StarDomain disc = make_domain({0.0, 0.0}, Circle{1.0});
  const StarDomain star = make_domain({0.0, 0.0}, Star{1.0, 0.2, 5});
  std::vector<ProblemPreset> reg;
  reg.push_back(make_preset("helmholtz_disc", "Helmholtz k=2 on the unit disc, u = sin(2 x1), f = 0",
                            Helmholtz{2.0}, disc, "sin2x1", true));
  reg.push_back(make_preset("helmholtz_star", "Helmholtz k=2 on a 5-lobed star, u = sin(2 x1), f = 0",
                            Helmholtz{2.0}, star, "sin2x1", true));
  reg.push_back(make_preset("helmholtz_kernel_trace",
                            "Helmholtz k=2 on the unit disc, u = J0(2 |x - (1,0)|), f = 0", Helmholtz{2.0},
                            disc, "j0_trace", true));
  reg.push_back(make_preset("modhelm_source",
                            "modified Helmholtz k=1 on the unit disc, u = sin(pi x1) sin(pi x2)",
                            ModifiedHelmholtz{1.0}, disc, "sinpi_sinpi", false));
  reg.push_back(make_preset("poisson_disc", "Poisson on the unit disc, u = sin(pi x1) sin(pi x2), Trefftz basis",
                            Poisson{}, disc, "sinpi_sinpi", false));
  reg.push_back(make_preset("convdiff_disc",
                            "convection-diffusion D=1, v=(2,0), kappa=1 on the unit disc, u = exp(x1)",
                            ConvectionDiffusion{1.0, {2.0, 0.0}, 1.0}, disc, "exp_x1", false));
  reg.push_back(make_preset("modhelm_neumann",
                            "modified Helmholtz k=1 on the unit disc, Neumann data from u = sin(pi x1) sin(pi x2)",
                            ModifiedHelmholtz{1.0}, disc, "sinpi_sinpi", false, BcKind::neumann));

  for (const auto& p : reg) {
    const double r = preset_consistency_residual(p, kConsistencyStep);
    if (!(r <= kConsistencyTolerance))
      throw std::logic_error("preset " + p.name + " fails L u* = f: residual " + std::to_string(r));
  }
  return reg;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double boundary_target(const ProblemPreset& problem, const BoundaryNode& node) {
  const ManufacturedField& u = *problem.exact;
  return problem.bc_kind == BcKind::dirichlet ? u.value(node.position)
                                              : dot(node.normal, u.gradient(node.position));
}

double boundary_achieved(const SolutionField& field, const ProblemPreset& problem, const BoundaryNode& node) {
  return problem.bc_kind == BcKind::dirichlet ? field.evaluate(node.position)
                                              : dot(node.normal, field.gradient(node.position));
}

}  // namespace

// ---------------------------------------------------------------------------
// Manufactured fields

ManufacturedField manufactured_field(const std::string& name) {
  if (name == "sin2x1") {
    return {name, [](Point2 x) { return std::sin(2.0 * x.x1); },
            [](Point2 x) { return Point2{2.0 * std::cos(2.0 * x.x1), 0.0}; },
            [](Point2 x) { return -4.0 * std::sin(2.0 * x.x1); }};
  }
  if (name == "sinpi_sinpi") {
    return {name, [](Point2 x) { return std::sin(kPi * x.x1) * std::sin(kPi * x.x2); },
            [](Point2 x) {
              return Point2{kPi * std::cos(kPi * x.x1) * std::sin(kPi * x.x2),
                            kPi * std::sin(kPi * x.x1) * std::cos(kPi * x.x2)};
            },
            [](Point2 x) { return -2.0 * kPi * kPi * std::sin(kPi * x.x1) * std::sin(kPi * x.x2); }};
  }
  if (name == "exp_x1") {
    return {name, [](Point2 x) { return std::exp(x.x1); },
            [](Point2 x) { return Point2{std::exp(x.x1), 0.0}; }, [](Point2 x) { return std::exp(x.x1); }};
  }
  if (name == "cos_x1") {
    return {name, [](Point2 x) { return std::cos(x.x1); },
            [](Point2 x) { return Point2{-std::sin(x.x1), 0.0}; }, [](Point2 x) { return -std::cos(x.x1); }};
  }
  if (name == "j0_trace") {
    const Helmholtz op{2.0};
    const Point2 s{1.0, 0.0};
    return {name, [op, s](Point2 x) { return kernel_value(op, x - s); },
            [op, s](Point2 x) { return kernel_gradient(op, x - s); },
            [op, s](Point2 x) { return -op.k * op.k * kernel_value(op, x - s); }};
  }
  std::string known;
  for (const auto& n : manufactured_field_names()) known += " " + n;
  throw ConfigError("unknown exact field '" + name + "'; known:" + known);
}

std::vector<std::string> manufactured_field_names() {
  return {"sin2x1", "sinpi_sinpi", "exp_x1", "cos_x1", "j0_trace"};
}

ScalarField source_from_exact(const OperatorSpec& op, const ManufacturedField& exact) {
  return std::visit(
      Overloaded{
          [&](const Poisson&) -> ScalarField { return exact.laplacian; },
          [&](const Helmholtz& h) -> ScalarField {
            return [u = exact, k2 = h.k * h.k](Point2 x) { return u.laplacian(x) + k2 * u.value(x); };
          },
          [&](const ModifiedHelmholtz& h) -> ScalarField {
            return [u = exact, k2 = h.k * h.k](Point2 x) { return u.laplacian(x) - k2 * u.value(x); };
          },
          [&](const ConvectionDiffusion& cd) -> ScalarField {
            return [u = exact, cd](Point2 x) {
              return cd.diffusivity * u.laplacian(x) + dot(cd.velocity, u.gradient(x)) - cd.reaction * u.value(x);
            };
          },
      },
      op);
}

// ---------------------------------------------------------------------------
// Presets

const std::vector<ProblemPreset>& preset_registry() {
  static const std::vector<ProblemPreset> registry = build_registry();
  return registry;
}

const ProblemPreset& find_preset(const std::string& name) {
  const auto& reg = preset_registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const ProblemPreset& p) { return p.name == name; });
  if (it == reg.end()) {
    std::string known;
    for (const auto& p : reg) known += " " + p.name;
    throw ConfigError("unknown preset '" + name + "'; known:" + known);
  }
  return *it;
}

double preset_consistency_residual(const ProblemPreset& preset, double h) {
  if (!preset.exact) return 0.0;
  double worst = 0.0;
  for (const Point2& x : interior_eval_points(preset.domain, 3, 12)) {
    const double lu = apply_operator_fd(preset.op, preset.exact->value, x, h);
    worst = std::max(worst, std::abs(lu - preset.source(x)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Configuration

RunConfig default_config(const ProblemPreset& preset) {
  RunConfig c;
  c.problem = preset;
  c.trefftz_order = preset.trefftz_order;
  return c;
}

void validate(const RunConfig& c) {
  validate(c.problem.op);
  if (!c.problem.exact) throw ConfigError("problem needs an exact field to derive boundary data");
  if (c.knots < 1) throw ConfigError("knots must be at least 1, got " + std::to_string(c.knots));
  if (!is_power_of_two(c.grid) || c.grid < kMinGrid || c.grid > kMaxGrid)
    throw ConfigError("grid must be a power of two in [32, 1024], got " + std::to_string(c.grid));
  if (!(c.taper.inner_fraction > 0.0 && c.taper.inner_fraction < 0.5))
    throw ConfigError("taper must lie in (0, 0.5), got " + std::to_string(c.taper.inner_fraction));
  if (!(c.box_margin >= 0.0) || !std::isfinite(c.box_margin))
    throw ConfigError("box_margin must be finite and non-negative");
  if (!(c.strategy.cutoff >= 0.0) || !std::isfinite(c.strategy.cutoff))
    throw ConfigError("svd_cutoff must be finite and non-negative");
  if (c.rings < 1 || c.per_ring < 1) throw ConfigError("rings and per_ring must be positive");
  if (std::holds_alternative<Poisson>(c.problem.op)) {
    if (c.trefftz_order < 0) throw ConfigError("trefftz_order must be non-negative");
    if (2 * c.trefftz_order + 1 > c.knots)
      throw ConfigError("trefftz_order " + std::to_string(c.trefftz_order) + " needs at least " +
                        std::to_string(2 * c.trefftz_order + 1) + " knots, got " + std::to_string(c.knots));
  }
}

// ---------------------------------------------------------------------------
// Pipeline

double SolutionField::evaluate(Point2 x) const {
  const double up = particular ? eval_particular(*particular, x) : 0.0;
  return up + eval_homogeneous(homogeneous, x);
}

Point2 SolutionField::gradient(Point2 x) const {
  const Point2 gp = particular ? eval_particular_gradient(*particular, x) : Point2{};
  return gp + eval_homogeneous_gradient(homogeneous, x);
}

SolveOutcome solve_problem(const RunConfig& config) {
  in_stage("validation", [&] { validate(config); });
  const ProblemPreset& problem = config.problem;
  SolveOutcome out;

  auto t0 = Clock::now();
  if (!problem.homogeneous) {
    out.field.particular = in_stage("particular", [&] {
      const Box2 box = bounding_box(problem.domain, config.box_margin);
      const SourceGrid grid = extend_source(problem.source, problem.domain, box, config.grid, config.taper);
      return solve_particular(problem.op, grid);
    });
    out.timings.particular_ms = elapsed_ms(t0);
  }

  t0 = Clock::now();
  CollocationSystem system = in_stage("assembly", [&] {
    const auto nodes = boundary_nodes(problem.domain, config.knots);
    std::vector<BoundaryCondition> bc;
    bc.reserve(nodes.size());
    for (const auto& node : nodes) {
      double value = boundary_target(problem, node);
      if (out.field.particular) {
        value -= problem.bc_kind == BcKind::dirichlet
                     ? eval_particular(*out.field.particular, node.position)
                     : dot(node.normal, eval_particular_gradient(*out.field.particular, node.position));
      }
      if (problem.bc_kind == BcKind::dirichlet)
        bc.emplace_back(Dirichlet{value});
      else
        bc.emplace_back(Neumann{value});
    }
    std::optional<TrefftzBasis> basis;
    if (std::holds_alternative<Poisson>(problem.op)) basis = trefftz_for(problem.domain, config.trefftz_order);
    return assemble(problem.op, nodes, bc, basis);
  });
  out.timings.assemble_ms = elapsed_ms(t0);

  t0 = Clock::now();
  auto [coeffs, diag] = in_stage("solve", [&] {
    SolverStrategy strategy = config.strategy;
    // Overdetermined Trefftz systems are solved in the least-squares sense.
    if (system.matrix.rows() != system.matrix.cols()) strategy.kind = SolverStrategy::Kind::tsvd;
    return solve_dense(system, strategy);
  });
  out.field.homogeneous = in_stage("solve", [&] { return make_solution(system, std::move(coeffs)); });
  out.diagnostics = diag;
  out.timings.solve_ms = elapsed_ms(t0);
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

ErrorMetrics error_metrics(const std::function<double(Point2)>& field,
                           const std::function<double(Point2)>& exact, const std::vector<Point2>& points) {
  if (points.empty()) throw DomainError("error_metrics: no evaluation points");
  double scale = 0.0, worst = 0.0, sq = 0.0;
  for (const Point2& x : points) {
    const double e = exact(x);
    const double d = std::abs(field(x) - e);
    scale = std::max(scale, std::abs(e));
    worst = std::max(worst, d);
    sq += d * d;
  }
  if (!(scale > 0.0)) throw DomainError("error_metrics: exact solution vanishes on every point");
  return {worst / scale, std::sqrt(sq / static_cast<double>(points.size())) / scale};
}

double residual_check(const std::function<double(Point2)>& field, const OperatorSpec& op,
                      const ScalarField& source, const std::vector<Point2>& points, double h) {
  double worst = 0.0;
  for (const Point2& x : points) worst = std::max(worst, std::abs(apply_operator_fd(op, field, x, h) - source(x)));
  return worst;
}

double boundary_residual(const SolutionField& field, const ProblemPreset& problem, int knots) {
  double worst = 0.0;
  for (const auto& node : off_knot_boundary_samples(problem.domain, knots))
    worst = std::max(worst, std::abs(boundary_achieved(field, problem, node) - boundary_target(problem, node)));
  return worst;
}

ConvergenceRow measure(const RunConfig& config) {
  const SolveOutcome out = solve_problem(config);
  const auto field = [&](Point2 x) { return out.field.evaluate(x); };
  const auto points = interior_eval_points(config.problem.domain, config.rings, config.per_ring);
  const ErrorMetrics m = error_metrics(field, config.problem.exact->value, points);
  ConvergenceRow row;
  row.knots = config.knots;
  row.max_err = m.max_err;
  row.rms_err = m.rms_err;
  row.boundary_residual = boundary_residual(out.field, config.problem, config.knots);
  row.condition_estimate = out.diagnostics.condition_estimate;
  row.assemble_ms = out.timings.assemble_ms;
  row.solve_ms = out.timings.solve_ms;
  row.particular_ms = out.timings.particular_ms;
  return row;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config, const std::vector<int>& knot_counts) {
  if (knot_counts.empty()) throw ConfigError("convergence study needs at least one knot count");
  for (std::size_t i = 1; i < knot_counts.size(); ++i)
    if (knot_counts[i] <= knot_counts[i - 1]) throw ConfigError("knot counts must be strictly increasing");
  std::vector<ConvergenceRow> rows;
  rows.reserve(knot_counts.size());
  for (int n : knot_counts) {
    RunConfig c = config;
    c.knots = n;
    try {
      rows.push_back(measure(c));
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rows.push_back({n, nan, nan, nan, nan, nan, nan, nan, e.what()});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, bool with_timings) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto t = [&](double v) { return format_double(with_timings || !r.error.empty() ? v : 0.0); };
    os << r.knots << ',' << format_double(r.max_err) << ',' << format_double(r.rms_err) << ','
       << format_double(r.boundary_residual) << ',' << format_double(r.condition_estimate) << ','
       << t(r.assemble_ms) << ',' << t(r.solve_ms) << ',' << t(r.particular_ms) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Verification

AnnihilationReport kernel_annihilation(const OperatorSpec& op, double h, int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AnnihilationReport rep;
  double sc = 0.0, sf = 0.0;
  const Point2 center{0.0, 0.0};
  const auto phi = [&](Point2 x) { return kernel_value(op, x - center); };
  for (int i = 0; i < count; ++i) {
    const double r = 0.05 + 1.95 * unit(rng);
    const double th = 2.0 * kPi * unit(rng);
    const Point2 x{r * std::cos(th), r * std::sin(th)};
    const double a = std::abs(apply_operator_fd(op, phi, x, h));
    const double b = std::abs(apply_operator_fd(op, phi, x, h / 2.0));
    rep.max_coarse = std::max(rep.max_coarse, a);
    rep.max_fine = std::max(rep.max_fine, b);
    sc += a * a;
    sf += b * b;
  }
  rep.rms_coarse = std::sqrt(sc / count);
  rep.rms_fine = std::sqrt(sf / count);
  return rep;
}

}  // namespace qrm
