#include "cryst/json_io.hpp"

#include <fstream>
#include <sstream>

#include "cryst/errors.hpp"

namespace cryst {

namespace {

double num(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double num_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

int dim_of(const Json& j) {
  const double d = num(j, "dim");
  if (d != 1 && d != 2 && d != 3) throw ConfigError("dim must be 1, 2 or 3");
  return static_cast<int>(d);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

Json to_json(const Point& p) {
  Json a = Json::array();
  for (double c : p.coords()) a.push_back(number(c));
  return a;
}

Json to_json(const Complex& c) { return Json::array({number(c.real()), number(c.imag())}); }

Point point_from_json(const Json& j, int dim) {
  if (j.is_number() && dim == 1) return Point{j.get<double>()};
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ConfigError("expected a point with " + std::to_string(dim) + " coordinates");
  }
  Point p(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError("point coordinates must be numbers");
    p[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return p;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("expected a number or [re, im]");
}

AtomicMeasure measure_from_json(const Json& j) {
  const int d = dim_of(j);
  std::vector<Atom> atoms;
  for (const Json& a : field(j, "atoms")) {
    atoms.push_back({point_from_json(field(a, "x"), d), complex_from_json(field(a, "mass"))});
  }
  return AtomicMeasure::build(d, num(j, "window"), std::move(atoms), num_or(j, "margin", 0.0));
}

Json to_json(const AtomicMeasure& m) {
  Json atoms = Json::array();
  for (const Atom& a : m.atoms()) atoms.push_back({{"x", to_json(a.x)}, {"mass", to_json(a.mass)}});
  return {{"dim", m.dim()}, {"window", m.window()}, {"margin", m.margin()}, {"atoms", atoms}};
}

LatticeCombSpec spec_from_json(const Json& j) {
  LatticeCombSpec s;
  s.dim = dim_of(j);
  s.window = num(j, "window");
  for (const Json& t : field(j, "terms")) {
    const Json& basis = field(t, "basis");
    if (!basis.is_array() || static_cast<int>(basis.size()) != s.dim) {
      throw ConfigError("basis needs dim vectors");
    }
    Eigen::MatrixXd b(s.dim, s.dim);
    for (int c = 0; c < s.dim; ++c) {
      const Point v = point_from_json(basis[static_cast<std::size_t>(c)], s.dim);
      for (int r = 0; r < s.dim; ++r) b(r, c) = v[r];
    }
    Point shift = t.contains("shift") ? point_from_json(t.at("shift"), s.dim) : Point(s.dim);
    std::vector<Mode> modes;
    if (t.contains("modes")) {
      for (const Json& m : t.at("modes")) {
        modes.push_back({complex_from_json(field(m, "beta")),
                         m.contains("alpha") ? point_from_json(m.at("alpha"), s.dim) : Point(s.dim)});
      }
    } else {
      modes.push_back({Complex{1.0, 0.0}, Point(s.dim)});
    }
    s.terms.push_back({Lattice(b), shift, std::move(modes)});
  }
  s.validate();
  return s;
}

Json to_json(const LatticeCombSpec& s) {
  Json terms = Json::array();
  for (const ShiftedLatticeTerm& t : s.terms) {
    Json basis = Json::array();
    for (int c = 0; c < s.dim; ++c) {
      Json v = Json::array();
      for (int r = 0; r < s.dim; ++r) v.push_back(t.lattice.basis()(r, c));
      basis.push_back(v);
    }
    Json modes = Json::array();
    for (const Mode& m : t.modes) modes.push_back({{"beta", to_json(m.beta)}, {"alpha", to_json(m.alpha)}});
    terms.push_back({{"basis", basis}, {"shift", to_json(t.shift)}, {"modes", modes}});
  }
  return {{"dim", s.dim}, {"window", s.window}, {"terms", terms}};
}

TestFunction test_function_from_json(const Json& j, int dim) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("test function needs a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    GaussianModulated g;
    g.a = num_or(j, "a", 1.0);
    g.center = j.contains("center") ? point_from_json(j.at("center"), dim) : Point(dim);
    g.modulation = j.contains("modulation") ? point_from_json(j.at("modulation"), dim) : Point(dim);
    g.amplitude = j.contains("amplitude") ? complex_from_json(j.at("amplitude")) : Complex{1.0, 0.0};
    return TestFunction(dim, g);
  }
  if (kind == "plateau") return TestFunction(dim, PlateauBump{num_or(j, "r_in", 1.0), num_or(j, "r_out", 2.0)});
  if (kind == "plateau_hat") {
    return TestFunction(dim, PlateauTransform{num_or(j, "r_in", 1.0), num_or(j, "r_out", 2.0)});
  }
  if (kind == "autocorr") return TestFunction(dim, BumpAutocorrelation{num_or(j, "radius", 1.0)});
  throw ConfigError("unknown test function kind '" + kind + "'");
}

Json to_json(const TestFunction& phi) {
  Json j = {{"kind", phi.kind()}, {"dim", phi.dim()}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianModulated>) {
          j["a"] = v.a;
          j["center"] = to_json(v.center);
          j["modulation"] = to_json(v.modulation);
          j["amplitude"] = to_json(v.amplitude);
        } else if constexpr (std::is_same_v<T, BumpAutocorrelation>) {
          j["radius"] = v.radius;
        } else {
          j["r_in"] = v.r_in;
          j["r_out"] = v.r_out;
        }
      },
      phi.variant());
  return j;
}

TrigPolynomial trig_from_json(const Json& j) {
  const int d = dim_of(j);
  std::vector<TrigTerm> terms;
  for (const Json& t : field(j, "terms")) {
    terms.push_back({point_from_json(field(t, "omega"), d), complex_from_json(field(t, "a"))});
  }
  return TrigPolynomial(d, std::move(terms));
}

Json to_json(const TrigPolynomial& d) {
  Json terms = Json::array();
  for (const TrigTerm& t : d.terms()) terms.push_back({{"omega", to_json(t.omega)}, {"a", to_json(t.a)}});
  return {{"dim", d.dim()}, {"terms", terms}};
}

KroneckerInstance instance_from_json(const Json& j) {
  const int d = dim_of(j);
  const double eps = num_or(j, "eps", 1e-2);
  const Json& vecs = field(j, "vectors");
  const Json& targets = field(j, "targets");
  if (!vecs.is_array() || !targets.is_array()) throw ConfigError("vectors and targets must be arrays");
  auto as_string = [](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ConfigError("mixed exact and floating entries");
  };
  bool vec_exact = false, vec_float = false;
  for (const Json& v : vecs) {
    const Json row = v.is_array() ? v : Json::array({v});
    for (const Json& e : row) {
      if (e.is_string()) {
        vec_exact = true;
      } else if (e.is_number_float()) {
        vec_float = true;
      }
    }
  }
  bool tgt_float = false;
  for (const Json& t : targets) tgt_float = tgt_float || t.is_number_float();
  if (vec_exact && vec_float) throw ConfigError("vectors mix exact strings and floating numbers");

  if (!vec_float) {
    std::vector<std::vector<std::string>> ev;
    for (const Json& v : vecs) {
      const Json row = v.is_array() ? v : Json::array({v});
      std::vector<std::string> r;
      for (const Json& e : row) r.push_back(as_string(e));
      ev.push_back(std::move(r));
    }
    std::vector<std::string> et;
    for (const Json& t : targets) et.push_back(tgt_float ? "0" : as_string(t));
    KroneckerInstance inst = KroneckerInstance::from_exact(d, ev, et, eps);
    if (tgt_float) {
      inst.exact_targets.reset();
      inst.targets.clear();
      for (const Json& t : targets) inst.targets.push_back(t.get<double>());
    }
    inst.validate();
    return inst;
  }
  KroneckerInstance inst;
  inst.dim = d;
  inst.eps = eps;
  for (const Json& v : vecs) inst.vectors.push_back(point_from_json(v, d));
  for (const Json& t : targets) {
    if (!t.is_number()) throw ConfigError("targets must be numbers when vectors are floating");
    inst.targets.push_back(t.get<double>());
  }
  inst.validate();
  return inst;
}

Json to_json(const KroneckerInstance& inst) {
  Json vecs = Json::array(), targets = Json::array();
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (inst.exact_vectors) {
      Json row = Json::array();
      for (const ExactReal& e : (*inst.exact_vectors)[j]) row.push_back(e.str());
      vecs.push_back(row);
    } else {
      vecs.push_back(to_json(inst.vectors[j]));
    }
    if (inst.exact_targets) {
      targets.push_back((*inst.exact_targets)[j].str());
    } else {
      targets.push_back(inst.targets[j]);
    }
  }
  return {{"dim", inst.dim}, {"vectors", vecs}, {"targets", targets}, {"eps", inst.eps}};
}

Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const mpz_class& x : v) a.push_back(x.get_str());
  return a;
}

Json to_json(const GrowthReport& r) {
  Json v = Json::array();
  for (double x : r.variations) v.push_back(number(x));
  return {{"radii", r.radii},
          {"variations", v},
          {"fitted_exponent", number(r.fitted_exponent)},
          {"fitted_constant", number(r.fitted_constant)},
          {"residual", number(r.residual)},
          {"polynomial", r.polynomial},
          {"samples_used", r.samples_used}};
}

Json to_json(const TranslationBoundReport& r) {
  return {{"ball_radius", r.ball_radius},   {"sup_estimate", r.sup_estimate},
          {"argmax_center", to_json(r.argmax_center)}, {"centers_scanned", r.centers_scanned},
          {"exact", r.exact},               {"grid_pitch", r.grid_pitch}};
}

Json to_json(const BoundednessCheck& r) {
  return {{"bounded", r.bounded},         {"growth_exponent", number(r.growth_exponent)},
          {"inner_sup", r.inner_sup},     {"outer_sup", r.outer_sup},
          {"reason", r.reason}};
}

Json to_json(const PartialMassBound& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}, {"count", r.count}};
}

Json to_json(const BohrEstimate& r) {
  return {{"value", to_json(r.value)},
          {"R", r.averaging_radius},
          {"center", to_json(r.center)},
          {"error_bound", r.error_bound}};
}

Json to_json(const ParsevalReport& r) {
  Json rows = Json::array();
  for (const ParsevalRow& row : r.rows) {
    rows.push_back({{"R", row.R}, {"mean_square", row.mean_square}, {"error_bound", row.error_bound}});
  }
  return {{"rows", rows},
          {"limit", r.limit},
          {"constant", r.constant},
          {"extrapolated", number(r.extrapolated)}};
}

Json to_json(const AlmostPeriodReport& r) {
  Json periods = Json::array();
  for (const Point& p : r.periods) periods.push_back(to_json(p));
  return {{"epsilon", r.epsilon},
          {"periods", periods},
          {"count", r.periods.size()},
          {"scan_range", r.scan_range},
          {"scan_pitch", r.scan_pitch},
          {"max_gap", r.max_gap},
          {"inclusion_length", r.inclusion_length},
          {"density_certified_within_scan_range_only", true}};
}

Json to_json(const CoefficientReport& r) {
  Json rows = Json::array();
  for (const CoefficientRow& row : r.rows) {
    Json j = {{"gamma", to_json(row.gamma)},
              {"closed_form", to_json(row.closed_form)},
              {"expected", to_json(row.expected)},
              {"error_bound", row.error_bound},
              {"agree", row.agree}};
    if (row.has_quadrature) {
      j["quadrature"] = to_json(row.quadrature);
      j["quadrature_error"] = row.quadrature_error;
    }
    rows.push_back(j);
  }
  return {{"rows", rows},
          {"R", r.R},
          {"center", to_json(r.center)},
          {"pointwise_max_diff", r.pointwise_max_diff},
          {"pointwise_samples", r.pointwise_samples},
          {"truncation_cutoff", number(r.truncation_cutoff)},
          {"truncation_tail", number(r.truncation_tail)},
          {"ok", r.ok}};
}

Json to_json(const KroneckerSolution& r) {
  Json p = Json::array();
  for (long long v : r.p) p.push_back(std::to_string(v));
  return {{"t", to_json(r.t)},
          {"p", p},
          {"residuals", r.residuals},
          {"max_residual", r.max_residual()},
          {"success", r.success},
          {"backend", r.backend},
          {"value", r.value},
          {"best_value", r.best_value},
          {"candidates", r.candidates},
          {"starts", r.starts}};
}

Json to_json(const RelationCheck& r) {
  Json rel = Json::array(), vio = Json::array();
  for (const IntVector& v : r.relations) rel.push_back(to_json(v));
  for (const IntVector& v : r.violations) vio.push_back(to_json(v));
  return {{"relations", rel}, {"violations", vio}, {"solvable", r.solvable},
          {"mode", r.mode},   {"numeric", r.numeric},  {"height", r.height},
          {"complete", r.complete}};
}

Json to_json(const PowerExpansion& r) {
  Json entries = Json::array();
  for (const ExpansionEntry& e : r.entries) {
    entries.push_back({{"m", e.m},
                       {"beta", to_json(e.beta)},
                       {"multinomial", e.c.get_str()},
                       {"phase", e.phase},
                       {"alpha", to_json(e.alpha)}});
  }
  Json merged = Json::array();
  for (const MergedTerm& t : r.merged) {
    Json j = {{"beta", to_json(t.beta)}, {"alpha", to_json(t.alpha)}, {"abs", t.abs}, {"exact", t.exact}};
    if (t.exact) j["abs_exact"] = t.abs_exact.get_str();
    merged.push_back(j);
  }
  return {{"q", r.q},
          {"N", r.n},
          {"entries", entries},
          {"entry_count", r.entries.size()},
          {"merged", merged},
          {"multinomial_total", r.multinomial_total.get_str()}};
}

Json to_json(const CertificateResult& r) {
  return {{"sum", r.sum_str()},          {"sum_abs", r.sum_abs},
          {"exact", r.exact},            {"target", r.target.get_str()},
          {"equals_target", r.equals_target}, {"strict_deficit", r.strict_deficit},
          {"passes", r.passes}};
}

Json to_json(const PoissonReport& r) {
  Json rows = Json::array();
  for (const PoissonRow& row : r.rows) {
    rows.push_back({{"function", row.function},
                    {"lhs", to_json(row.lhs)},
                    {"rhs", to_json(row.rhs)},
                    {"residual", row.residual},
                    {"tail_bound", row.tail_bound},
                    {"pass", row.pass}});
  }
  return {{"spec_id", r.spec_id},     {"rows", rows},
          {"window_used", r.window_used}, {"max_residual", r.max_residual},
          {"residual", r.max_residual}, {"threshold", r.threshold},
          {"pass", r.pass}};
}

Json to_json(const Theorem2Report& r) {
  Json centers = Json::array();
  std::size_t failed = 0;
  for (const CenterCheck& c : r.centers) {
    if (!c.pass) ++failed;
  }
  // the full center list is long; keep the first few and every failure
  for (std::size_t i = 0; i < r.centers.size(); ++i) {
    const CenterCheck& c = r.centers[i];
    if (i >= 20 && c.pass) continue;
    centers.push_back({{"y0", to_json(c.y0)},
                       {"nu_ball", c.nu_ball},
                       {"direct", c.direct},
                       {"parseval_limit", c.parseval_limit},
                       {"rel_diff", c.rel_diff},
                       {"pass", c.pass}});
  }
  Json partial = Json::array();
  for (const PartialMassBound& p : r.partial) partial.push_back(to_json(p));
  return {{"spec_id", r.spec_id},
          {"gate", to_json(r.gate)},
          {"boundedness", to_json(r.boundedness)},
          {"nu_bound", to_json(r.nu_bound)},
          {"C", r.C},
          {"centers_checked", r.centers.size()},
          {"centers_failed", failed},
          {"centers", centers},
          {"max_rel_diff", r.max_rel_diff},
          {"chain_ok", r.chain_ok},
          {"agreement_ok", r.agreement_ok},
          {"radii", r.radii},
          {"partial_mass", partial},
          {"count_fit", to_json(r.count_fit)},
          {"mass_fit", to_json(r.mass_fit)},
          {"tempered_limit", number(r.tempered_limit)},
          {"tempered_ok", r.tempered_ok},
          {"pass", r.pass}};
}

Json to_json(const Theorem3Report& r) {
  Json balls = Json::array();
  for (const BallReport& b : r.balls) {
    Json g = Json::array(), m = Json::array();
    for (const Point& p : b.gammas) g.push_back(to_json(p));
    for (const Complex& c : b.masses) m.push_back(to_json(c));
    balls.push_back({{"center", to_json(b.center)},
                     {"gammas", g},
                     {"masses", m},
                     {"core_mass", b.core_mass},
                     {"status", b.status},
                     {"x", to_json(b.x)},
                     {"residuals", b.residuals},
                     {"kronecker_success", b.kronecker_success},
                     {"re_sum", b.re_sum},
                     {"abs_sum", b.abs_sum},
                     {"weighted_mass", b.weighted_mass},
                     {"aligned", b.aligned},
                     {"under_ceiling", b.under_ceiling}});
  }
  return {{"spec_id", r.spec_id},
          {"eta", r.eta},
          {"balls", balls},
          {"c1", r.c1},
          {"c2", r.c2},
          {"ceiling", r.ceiling},
          {"translation_bounded", r.translation_bounded},
          {"max_core_mass", r.max_core_mass},
          {"independent", r.independent},
          {"dependent", r.dependent},
          {"alignment_ok", r.alignment_ok},
          {"ceiling_ok", r.ceiling_ok},
          {"pass", r.pass}};
}

Json to_json(const AlignmentTrial& r) {
  Json m = Json::array();
  for (const Complex& c : r.masses) m.push_back(to_json(c));
  return {{"frequencies", r.frequencies}, {"masses", m},       {"status", r.status},
          {"solution", to_json(r.solution)}, {"re_sum", r.re_sum}, {"mass", r.mass},
          {"pass", r.pass}};
}

Json to_json(const Prop2Certificate& r) {
  return {{"eta", r.eta},
          {"r", r.r},
          {"x0", to_json(r.x0)},
          {"max_phi", r.max_phi},
          {"hat_mu_ball_mass", r.hat_mu_ball_mass},
          {"rhs", r.rhs},
          {"max_lhs", r.max_lhs},
          {"worst_center", to_json(r.worst_center)},
          {"margin", r.margin},
          {"holds", r.holds},
          {"probes", r.probes},
          {"lipschitz", r.lipschitz}};
}

Json to_json(const Prop3Certificate& r) {
  return {{"c1", r.c1},
          {"c2", r.c2},
          {"bound", r.bound},
          {"observed_sup", r.observed_sup},
          {"argmax", to_json(r.argmax)},
          {"margin", r.margin},
          {"holds", r.holds},
          {"probes", r.probes}};
}

}  // namespace cryst
