#include "reeb/io.hpp"

#include "reeb/errors.hpp"

#include <fstream>
#include <sstream>

namespace reeb {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InputError("malformed number '" + s + "'");
  }
  if (pos != s.size()) throw InputError("malformed number '" + s + "'");
  return v;
}

/// Exact when the JSON value is an integer or a "p/q"/integer string.
Action number_from_json(const Json& j) {
  if (j.is_number_integer() || j.is_number_unsigned()) return Action(Rational(j.get<std::int64_t>()));
  if (j.is_number_float()) return Action(j.get<double>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (is_rational_literal(s)) return Action(parse_rational(s));
    return Action(parse_double(s));
  }
  throw InputError("expected a number or a \"p/q\" string");
}

std::vector<Action> numbers_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("missing array '") + key + "'");
  std::vector<Action> out;
  for (const auto& v : j.at(key)) out.push_back(number_from_json(v));
  return out;
}

Ellipsoid ellipsoid_from_actions(const std::vector<Action>& a) {
  if (a.empty()) throw InputError("ellipsoid needs at least one parameter");
  bool exact = true;
  for (const auto& x : a) exact = exact && x.is_exact();
  if (exact) {
    std::vector<Rational> r;
    for (const auto& x : a) r.push_back(*x.exact);
    return Ellipsoid::exact(std::move(r));
  }
  std::vector<double> d;
  for (const auto& x : a) d.push_back(x.value);
  return Ellipsoid::floating(std::move(d));
}

}  // namespace

Ellipsoid parse_ellipsoid_list(const std::string& text) {
  const auto tokens = split(text, ',');
  if (tokens.empty()) throw InputError("empty ellipsoid parameter list");
  bool exact = true;
  for (const auto& t : tokens) {
    if (t.empty()) throw InputError("empty ellipsoid parameter in '" + text + "'");
    exact = exact && is_rational_literal(t);
  }
  if (exact) return Ellipsoid::parse(tokens);
  std::vector<double> d;
  for (const auto& t : tokens) d.push_back(is_rational_literal(t) ? to_double(parse_rational(t)) : parse_double(t));
  return Ellipsoid::floating(std::move(d));
}

BodyInput body_from_ellipsoid(const Ellipsoid& e) {
  BodyInput in;
  in.ellipsoid = e;
  in.body = ConvexBody::ellipsoid(e.params());
  return in;
}

BodyInput parse_body(const Json& j) {
  if (!j.is_object()) throw InputError("body must be a JSON object");
  const std::string type = j.value("type", std::string());
  const double alpha = j.contains("alpha") ? number_from_json(j.at("alpha")).value : ConvexBody::default_alpha;
  const auto a = numbers_from_json(j, "a");
  if (type == "ellipsoid") {
    BodyInput in = body_from_ellipsoid(ellipsoid_from_actions(a));
    in.body = in.body->homogenize(alpha);
    return in;
  }
  if (type == "perturbed") {
    if (!j.contains("epsilon")) throw InputError("perturbed body needs 'epsilon'");
    const double eps = number_from_json(j.at("epsilon")).value;
    const auto quartic = j.contains("quartic") ? numbers_from_json(j, "quartic") : std::vector<Action>{};
    std::vector<double> ad, cd;
    for (const auto& x : a) ad.push_back(x.value);
    for (const auto& x : quartic) cd.push_back(x.value);
    BodyInput in;
    in.body = ConvexBody::perturbed(ad, eps, cd, alpha);
    if (in.body->is_ellipsoid()) in.ellipsoid = ellipsoid_from_actions(a);
    return in;
  }
  throw InputError("unknown body type '" + type + "'");
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
}

BodyInput load_body(const std::string& path) { return parse_body(read_json_file(path)); }

Json to_json(const Action& a) {
  if (a.is_exact()) return to_string(*a.exact);
  return a.value;
}

Action action_from_json(const Json& j) { return number_from_json(j); }

Json spectrum_to_json(const Ellipsoid& e, const Spectrum& s, const Action& max_action) {
  Json params = Json::array();
  for (std::size_t h = 0; h < e.n(); ++h) params.push_back(to_json(e.param(h)));
  Json rows = Json::array();
  for (const auto& r : s.entries) {
    rows.push_back({{"tau", to_json(r.tau)},
                    {"tau_value", r.tau.value},
                    {"multiplicity", r.multiplicity},
                    {"morse", r.morse_index},
                    {"nullity", r.nullity},
                    {"cz", r.cz_index}});
  }
  return {{"parameters", params},
          {"n", e.n()},
          {"arithmetic", s.mode == Arithmetic::exact ? "exact" : "float"},
          {"tol_merge", s.tol_merge},
          {"max_action", to_json(max_action)},
          {"entries", rows},
          {"warnings", s.warnings}};
}

SpectrumInput spectrum_from_json(const Json& doc) {
  // Accepts the full tool output as well as its result object.
  const Json& j = doc.is_object() && doc.contains("result") ? doc.at("result") : doc;
  if (!j.is_object() || !j.contains("entries")) throw InputError("spectrum JSON needs 'entries'");
  SpectrumInput in;
  if (j.contains("parameters")) in.ellipsoid = ellipsoid_from_actions(numbers_from_json(j, "parameters"));
  in.n = j.contains("n") ? j.at("n").get<int>() : (in.ellipsoid ? static_cast<int>(in.ellipsoid->n()) : 0);
  if (in.n < 1) throw InputError("spectrum JSON needs 'n' or 'parameters'");
  in.mode = j.value("arithmetic", std::string("exact")) == "exact" ? Arithmetic::exact : Arithmetic::floating;
  for (const auto& row : j.at("entries")) {
    SpectrumEntry e;
    e.tau = action_from_json(row.at("tau"));
    e.multiplicity = row.at("multiplicity").get<int>();
    if (e.multiplicity < 1) throw InputError("multiplicity must be positive");
    e.morse_index = row.value("morse", std::int64_t{0});
    e.nullity = row.value("nullity", std::int64_t{2 * e.multiplicity - 1});
    e.cz_index = row.value("cz", e.morse_index + in.n);
    in.entries.push_back(e);
  }
  return in;
}

Json hits_to_json(const std::vector<InvariantHit>& hits) {
  Json out = Json::array();
  for (const auto& h : hits) out.push_back({{"i", h.i}, {"tau", to_json(h.tau)}, {"mu", h.mu}, {"exact", h.exact}});
  return out;
}

Json certificate_to_json(const PinchingCertificate& c) {
  Json w = Json::array();
  for (const auto& x : c.witnesses) w.push_back(to_json(x));
  Json chain = {{"pi_R2", c.pi_R2},
                {"delta2_pi_r2", c.delta2_pi_r2},
                {"delta2_sys", c.delta2_sys},
                {"c_n_minus_1_le_pi_R2", c.chain_first},
                {"pi_R2_lt_delta2_pi_r2", c.chain_second},
                {"delta2_pi_r2_le_delta2_sys", c.chain_third}};
  if (c.c_n_minus_1) chain["c_n_minus_1"] = *c.c_n_minus_1;
  return {{"tag", c.tag},
          {"verdict", to_string(c.verdict)},
          {"reason", c.reason},
          {"inputs", {{"r", c.r}, {"R", c.R}, {"delta", c.delta}, {"systole", c.systole}}},
          {"interval", {c.systole, c.interval_hi}},
          {"witnesses", w},
          {"bound_chain", chain},
          {"tolerance", c.tol}};
}

Json orbit_to_json(const ClosedOrbit& o) {
  Json eig = Json::array();
  for (const auto& z : o.monodromy_eigenvalues()) eig.push_back({z.real(), z.imag()});
  Json out = {{"period", o.period},
              {"initial_point", std::vector<double>(o.initial_point.data(), o.initial_point.data() + o.initial_point.size())},
              {"residual", o.residual},
              {"monodromy_eigenvalues", eig},
              {"symplectic_defect", o.symplectic_defect}};
  if (o.indices_filled) {
    out["cz"] = o.cz;
    out["morse"] = o.morse;
    out["nullity"] = o.nullity;
    out["nullity_direct"] = o.nullity_direct;
    out["alpha"] = o.alpha;
    out["block_residual"] = o.block_residual;
    out["block_flag"] = o.block_flag;
  }
  return out;
}

Json clarke_to_json(const ClarkeResult& r) {
  Json starts = Json::array();
  for (const auto& s : r.starts) {
    starts.push_back({{"kind", s.kind},
                      {"psi", s.psi},
                      {"action", s.action},
                      {"gradient_norm", s.gradient_norm},
                      {"iterations", s.iterations},
                      {"stalled", s.stalled},
                      {"converged", s.converged}});
  }
  return {{"systole", r.systole},
          {"psi", r.psi},
          {"gradient_norm", r.gradient_norm},
          {"modes", r.modes},
          {"hamiltonian_residual", r.hamiltonian_residual},
          {"orbit_residual", r.orbit.residual},
          {"top_mode_fraction", r.top_mode_fraction},
          {"doubled_systole", r.doubled_systole},
          {"doubling_delta", r.doubling_delta},
          {"advisory", r.advisory},
          {"starts", starts}};
}

Json bott_row_to_json(const BottRow& row) {
  return {{"m", row.m},
          {"ind", row.bott.index},
          {"nul", row.bott.nullity},
          {"deg_alpha", row.degrees.alpha},
          {"deg_beta", row.degrees.beta},
          {"action", row.action}};
}

}  // namespace reeb
