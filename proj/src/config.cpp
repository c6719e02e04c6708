#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qrm/driver.hpp"
#include "qrm/errors.hpp"

namespace qrm {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  return obj.at(key);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
  return v.get<std::string>();
}

Point2 point(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("key '" + key + "' must be an array of 2 numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

OperatorSpec parse_operator(const json& j) {
  if (!j.is_object()) throw ConfigError("key 'operator' must be an object");
  const std::string type = text(require(j, "type", "operator"), "type");
  OperatorSpec op;
  if (type == "poisson") {
    reject_unknown(j, {"type"}, "operator");
    op = Poisson{};
  } else if (type == "helmholtz") {
    reject_unknown(j, {"type", "k"}, "operator");
    op = Helmholtz{number(require(j, "k", "operator"), "k")};
  } else if (type == "modified_helmholtz") {
    reject_unknown(j, {"type", "k"}, "operator");
    op = ModifiedHelmholtz{number(require(j, "k", "operator"), "k")};
  } else if (type == "convection_diffusion") {
    reject_unknown(j, {"type", "diffusivity", "velocity", "reaction"}, "operator");
    ConvectionDiffusion cd;
    cd.diffusivity = number(require(j, "diffusivity", "operator"), "diffusivity");
    cd.velocity = point(require(j, "velocity", "operator"), "velocity");
    cd.reaction = j.contains("reaction") ? number(j.at("reaction"), "reaction") : 0.0;
    op = cd;
  } else {
    throw ConfigError("unknown operator type '" + type + "'");
  }
  validate(op);
  return op;
}

StarDomain parse_domain(const json& j) {
  if (!j.is_object()) throw ConfigError("key 'domain' must be an object");
  const std::string type = text(require(j, "type", "domain"), "type");
  const Point2 center = j.contains("center") ? point(j.at("center"), "center") : Point2{};
  if (type == "circle") {
    reject_unknown(j, {"type", "center", "radius"}, "domain");
    return make_domain(center, Circle{number(require(j, "radius", "domain"), "radius")});
  }
  if (type == "ellipse") {
    reject_unknown(j, {"type", "center", "a", "b"}, "domain");
    return make_domain(center, Ellipse{number(require(j, "a", "domain"), "a"), number(require(j, "b", "domain"), "b")});
  }
  if (type == "star") {
    reject_unknown(j, {"type", "center", "rho0", "amplitude", "lobes"}, "domain");
    return make_domain(center, Star{number(require(j, "rho0", "domain"), "rho0"),
                                    number(require(j, "amplitude", "domain"), "amplitude"),
                                    integer(require(j, "lobes", "domain"), "lobes")});
  }
  throw ConfigError("unknown domain type '" + type + "'");
}

BcKind parse_bc_kind(const json& v) {
  const std::string s = text(v, "bc_kind");
  if (s == "dirichlet") return BcKind::dirichlet;
  if (s == "neumann") return BcKind::neumann;
  throw ConfigError("bc_kind must be 'dirichlet' or 'neumann', got '" + s + "'");
}

ProblemPreset parse_problem(const json& j) {
  if (!j.is_object()) throw ConfigError("key 'problem' must be an object");
  reject_unknown(j, {"operator", "domain", "bc_kind", "exact"}, "problem");
  ProblemPreset p;
  p.name = "inline";
  p.description = "inline problem";
  p.op = parse_operator(require(j, "operator", "problem"));
  p.domain = parse_domain(require(j, "domain", "problem"));
  p.bc_kind = j.contains("bc_kind") ? parse_bc_kind(j.at("bc_kind")) : BcKind::dirichlet;
  p.exact = manufactured_field(text(require(j, "exact", "problem"), "exact"));
  p.source = source_from_exact(p.op, *p.exact);
  return p;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"preset", "problem", "knots", "grid", "box_margin", "taper", "trefftz_order", "svd_cutoff",
                  "strategy", "rings", "per_ring", "output"},
                 "config");
  if (j.contains("preset") == j.contains("problem"))
    throw ConfigError("config needs exactly one of 'preset' or 'problem'");

  RunConfig c = j.contains("preset") ? default_config(find_preset(text(j.at("preset"), "preset")))
                                     : default_config(parse_problem(j.at("problem")));
  if (j.contains("knots")) c.knots = integer(j.at("knots"), "knots");
  if (j.contains("grid")) c.grid = integer(j.at("grid"), "grid");
  if (j.contains("box_margin")) c.box_margin = number(j.at("box_margin"), "box_margin");
  if (j.contains("taper")) c.taper.inner_fraction = number(j.at("taper"), "taper");
  if (j.contains("trefftz_order")) c.trefftz_order = integer(j.at("trefftz_order"), "trefftz_order");
  if (j.contains("svd_cutoff")) c.strategy.cutoff = number(j.at("svd_cutoff"), "svd_cutoff");
  if (j.contains("strategy")) {
    const std::string s = text(j.at("strategy"), "strategy");
    if (s == "lu")
      c.strategy.kind = SolverStrategy::Kind::lu;
    else if (s == "tsvd")
      c.strategy.kind = SolverStrategy::Kind::tsvd;
    else
      throw ConfigError("strategy must be 'lu' or 'tsvd', got '" + s + "'");
  }
  if (j.contains("rings")) c.rings = integer(j.at("rings"), "rings");
  if (j.contains("per_ring")) c.per_ring = integer(j.at("per_ring"), "per_ring");
  if (j.contains("output")) c.output = text(j.at("output"), "output");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qrm
