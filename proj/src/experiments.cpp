#include "cryst/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cryst/almost_periodic.hpp"
#include "cryst/errors.hpp"
#include "cryst/schwartz.hpp"

namespace cryst {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const TestFunction& phi) {
  std::ostringstream os;
  os << phi.kind();
  if (const auto* g = std::get_if<GaussianModulated>(&phi.variant())) os << "(a=" << g->a << ")";
  if (const auto* p = std::get_if<PlateauBump>(&phi.variant())) {
    os << "(" << p->r_in << "," << p->r_out << ")";
  }
  return os.str();
}

// Mass of sum m delta_x over x in (L + shift) with |x| >= w, weighted by phi.
double comb_tail(const Lattice& l, double mass_bound, const TestFunction& phi, double w) {
  const double rp = 0.5 * l.shortest_vector_length();
  const int d = l.dim();
  double tail = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double s = w + k;
    const double count = std::pow((s + 1.0 + rp) / rp, d);
    const double term = mass_bound * count * decay_bound(phi, s);
    tail += term;
    if (k > 4 && term < 1e-20 * std::max(1.0, tail)) break;
  }
  return tail;
}

double spec_tail(const LatticeCombSpec& spec, const TestFunction& phi, const TestFunction& phi_hat,
                 double w) {
  double t = 0.0;
  for (const ShiftedLatticeTerm& term : spec.terms) {
    const double m = term_mass_bound(term);
    t += comb_tail(dual_lattice(term.lattice), m / term.lattice.covolume(), phi, w);
    t += comb_tail(term.lattice, m, phi_hat, w);
  }
  return t;
}

std::vector<Point> sample_centers(int dim, double radius, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Point> out;
  while (out.size() < n) {
    Point p(dim);
    for (int c = 0; c < dim; ++c) p[c] = u(rng);
    if (p.norm() < radius) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<TestFunction> default_poisson_functions(int dim) {
  return {TestFunction::gaussian(dim, 0.5), TestFunction::gaussian(dim, 1.0),
          TestFunction::gaussian(dim, 2.0)};
}

PoissonReport poisson_check(const LatticeCombSpec& spec, const std::vector<TestFunction>& phis,
                            const std::string& spec_id, double threshold) {
  spec.validate();
  PoissonReport rep;
  rep.spec_id = spec_id;
  rep.threshold = threshold;
  std::vector<TestFunction> hats;
  for (const TestFunction& phi : phis) {
    if (phi.dim() != spec.dim) throw ConfigError("test function dimension mismatch");
    if (phi.kind() != "gaussian") throw ConfigError("Poisson check takes Gaussian test functions");
    hats.push_back(fourier_transform(phi));
  }
  double w = spec.window;
  for (int it = 0;; ++it) {
    double worst = 0.0;
    for (std::size_t i = 0; i < phis.size(); ++i) {
      worst = std::max(worst, spec_tail(spec, phis[i], hats[i], w));
    }
    if (worst < 1e-12) break;
    if (it > 60) throw ResourceError("cannot reach the Poisson tail target");
    w *= 1.25;
  }
  rep.window_used = w;
  RealizeOptions ro;
  ro.window = w;
  const AtomicMeasure mu = realize_measure(spec, ro);
  const AtomicMeasure mu_hat = fourier_of_spec(spec, ro);
  for (std::size_t i = 0; i < phis.size(); ++i) {
    PoissonRow row;
    row.function = describe(phis[i]);
    for (const Atom& a : mu_hat.atoms()) row.lhs += a.mass * evaluate(phis[i], a.x);
    for (const Atom& a : mu.atoms()) row.rhs += a.mass * fourier(phis[i], a.x);
    const double scale = std::max(1.0, std::abs(row.lhs));
    row.residual = std::abs(row.lhs - row.rhs) / scale;
    row.tail_bound = spec_tail(spec, phis[i], hats[i], w);
    row.pass = row.residual < threshold + row.tail_bound / scale;
    rep.max_residual = std::max(rep.max_residual, row.residual);
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

Theorem2Report theorem2_harness(const LatticeCombSpec& spec, const Theorem2Options& opts,
                                const std::string& spec_id) {
  spec.validate();
  if (!(opts.r_in >= 1.0) || !(opts.r_out > opts.r_in)) {
    throw ConfigError("plateau must be identically 1 on B(0, 1): need 1 <= r_in < r_out");
  }
  Theorem2Report rep;
  rep.spec_id = spec_id;
  rep.gate = poisson_check(spec, default_poisson_functions(spec.dim), spec_id);
  if (!rep.gate.pass) throw CheckRefused("Poisson gate failed for " + spec_id);
  const AtomicMeasure mu = realize_measure(spec);
  rep.boundedness = looks_translation_bounded(mu);
  if (!rep.boundedness.bounded) {
    throw CheckRefused("measure is not translation bounded: " + rep.boundedness.reason);
  }
  const AtomicMeasure mu_hat = fourier_of_spec(spec);
  const AtomicMeasure nu = squared_mass_measure(mu_hat);
  const int d = spec.dim;
  rep.nu_bound = translation_bound_estimate(nu, 1.0);

  const TestFunction phi = TestFunction::plateau(d, opts.r_in, opts.r_out);
  const double core = spec.window - opts.r_out - 1.0;
  if (core <= 0.0) throw ConfigError("window too small for the plateau");
  std::vector<Point> centers = opts.centers;
  if (centers.empty()) centers = sample_centers(d, core, opts.n_centers, opts.seed);

  for (const Point& y0 : centers) {
    if (y0.dim() != d) throw ConfigError("center dimension mismatch");
    if (y0.norm() >= core) throw ConfigError("center too close to the window edge: " + y0.str());
    CenterCheck cc;
    cc.y0 = y0;
    cc.nu_ball = variation_on_ball(nu, y0, 1.0).value;
    std::vector<TrigTerm> terms;
    for (const Atom& a : mu_hat.atoms()) {
      const Point diff = a.x - y0;
      if (diff.norm() >= opts.r_out) continue;
      const Complex c = a.mass * evaluate(phi, diff);
      cc.direct += std::norm(c);
      terms.push_back({a.x, c});
    }
    const TrigPolynomial trig(d, std::move(terms));
    const ParsevalReport pr = parseval_check(trig, opts.schedule, Point(d));
    cc.parseval_limit = pr.extrapolated;
    cc.rel_diff = std::abs(cc.parseval_limit - cc.direct) / std::max(cc.direct, 1e-300);
    if (cc.direct == 0.0) cc.rel_diff = std::abs(cc.parseval_limit);
    rep.max_rel_diff = std::max(rep.max_rel_diff, cc.rel_diff);
    rep.C = std::max(rep.C, cc.parseval_limit);
    rep.centers.push_back(cc);
  }
  for (CenterCheck& cc : rep.centers) {
    cc.pass = cc.nu_ball <= rep.C * (1.0 + 1e-12) && cc.rel_diff <= opts.agreement;
    rep.chain_ok = rep.chain_ok && cc.nu_ball <= rep.C * (1.0 + 1e-12) &&
                   cc.nu_ball <= cc.direct * (1.0 + 1e-12);
  }
  rep.agreement_ok = rep.max_rel_diff <= opts.agreement;

  // tempered-bound fit on sum_{|g|<r} |b_g|
  std::vector<double> radii = opts.growth_radii;
  if (radii.empty()) {
    const double top = 0.9 * spec.window;
    for (double r = std::min(10.0, top / 4.0); r <= top; r *= 1.25) radii.push_back(r);
  }
  std::vector<double> counts, masses;
  const Point origin(d);
  for (double r : radii) {
    rep.partial.push_back(partial_mass_bound_check(mu_hat, r));
    rep.tempered_ok = rep.tempered_ok && rep.partial.back().holds;
    counts.push_back(static_cast<double>(count_in_ball(mu_hat, origin, r)));
    masses.push_back(variation_on_ball(mu_hat, origin, r).value);
  }
  rep.radii = radii;
  rep.count_fit = fit_loglog(radii, counts);
  rep.mass_fit = fit_loglog(radii, masses);
  rep.tempered_limit = (d + rep.count_fit.fitted_exponent) / 2.0 + 0.1;
  if (!rep.mass_fit.polynomial || !(rep.mass_fit.fitted_exponent <= rep.tempered_limit)) {
    rep.tempered_ok = false;
  }
  rep.pass = rep.chain_ok && rep.agreement_ok && rep.tempered_ok;
  return rep;
}

AlignmentTrial align_phases(const KroneckerInstance& frequencies, const std::vector<Complex>& masses,
                            const SolveOptions& opts) {
  if (masses.size() != frequencies.size()) throw ConfigError("need one mass per frequency");
  KroneckerInstance inst = frequencies;
  inst.targets.clear();
  for (const Complex& b : masses) inst.targets.push_back(-std::arg(b) / (2.0 * kPi));
  inst.exact_targets.reset();
  AlignmentTrial out;
  out.masses = masses;
  out.solution = solve(inst, opts);
  for (std::size_t j = 0; j < masses.size(); ++j) {
    out.mass += std::abs(masses[j]);
    out.re_sum += std::real(masses[j] * unit_phase(dot(inst.vectors[j], out.solution.t)));
  }
  out.pass = out.solution.success && out.re_sum >= 0.5 * out.mass &&
             out.re_sum <= out.mass * (1.0 + 1e-12);
  return out;
}

std::vector<AlignmentTrial> phase_alignment_trials(int count, std::uint64_t seed, int max_freqs) {
  if (max_freqs < 1 || max_freqs > 5) throw ConfigError("max_freqs must be in 1..5");
  static const int primes[] = {2, 3, 5, 7, 11};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cnum(1, 40);
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  std::vector<AlignmentTrial> out;
  for (int i = 0; i < count; ++i) {
    const int k = 1 + i % max_freqs;
    const int c = cnum(rng);
    std::vector<std::vector<std::string>> vecs;
    std::vector<std::string> targets;
    std::vector<Complex> masses;
    for (int j = 0; j < k; ++j) {
      vecs.push_back({std::to_string(c) + "/7 + sqrt(" + std::to_string(primes[j]) + ")/50"});
      targets.push_back("0");
      masses.push_back(std::polar(1.0, 2.0 * kPi * turn(rng)));
    }
    const KroneckerInstance freq = KroneckerInstance::from_exact(1, vecs, targets, 0.15);
    const RelationCheck rc = relation_check(freq);
    SolveOptions so;
    so.seed = seed + static_cast<std::uint64_t>(i);
    AlignmentTrial t = align_phases(freq, masses, so);
    for (const auto& v : vecs) t.frequencies.push_back(v[0]);
    t.status = rc.relations.empty() ? "independent" : "dependent";
    t.pass = t.pass && t.status == "independent";
    out.push_back(std::move(t));
  }
  return out;
}

Theorem3Report theorem3_harness(const LatticeCombSpec& spec, double eta, const Theorem3Options& opts,
                                const std::string& spec_id) {
  spec.validate();
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(opts.kronecker_eps > 0.0) || opts.kronecker_eps >= 1.0 / 6.0) {
    throw ConfigError("alignment eps must lie in (0, 1/6)");
  }
  const int d = spec.dim;
  Theorem3Report rep;
  rep.spec_id = spec_id;
  rep.eta = eta;
  const AtomicMeasure mu = realize_measure(spec);
  const AtomicMeasure mu_hat = fourier_of_spec(spec);
  if (opts.region + eta >= mu_hat.window()) throw ConfigError("region exceeds the spectrum window");
  rep.translation_bounded = looks_translation_bounded(mu).bounded;
  const TestFunction phi = TestFunction::plateau(d, eta / 2.0, eta);
  const TestFunction phi_hat(d, PlateauTransform{eta / 2.0, eta});
  rep.c1 = estimate_growth_constant(mu);
  rep.c2 = decay_constant(phi_hat, d + 1).value;
  rep.ceiling = (d + 1) * rep.c1 * rep.c2;

  std::vector<Point> pts;
  for (const Atom& a : mu_hat.atoms()) {
    if (a.x.norm() < opts.region) pts.push_back(a.x);
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const Point& a, const Point& b) { return a.norm() < b.norm(); });
  std::vector<bool> used(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    BallReport ball;
    ball.center = pts[i];
    for (std::size_t j = i; j < pts.size(); ++j) {
      if (!used[j] && distance(pts[j], pts[i]) < eta / 2.0) used[j] = true;
    }
    std::vector<Complex> weighted;
    std::vector<Point> nonzero;
    std::vector<Complex> nonzero_w;
    Complex fixed;
    bool has_zero = false;
    for (const Atom& a : mu_hat.atoms()) {
      const Point diff = a.x - ball.center;
      if (diff.norm() >= eta) continue;
      const double w = evaluate(phi, diff).real();
      ball.gammas.push_back(a.x);
      ball.masses.push_back(a.mass);
      if (diff.norm() < eta / 2.0) ball.core_mass += std::abs(a.mass);
      ball.weighted_mass += w * std::abs(a.mass);
      if (a.x.norm() == 0.0) {
        has_zero = true;
        fixed += w * a.mass;
      } else {
        nonzero.push_back(a.x);
        nonzero_w.push_back(w * a.mass);
      }
    }
    if (has_zero) {
      ball.status = "dependent";
    } else if (nonzero.size() == 1) {
      ball.status = "singleton";
    } else if (nonzero.size() > 8) {
      ball.status = "dependent";
    } else {
      KroneckerInstance probe;
      probe.dim = d;
      probe.vectors = nonzero;
      probe.targets.assign(nonzero.size(), 0.0);
      probe.eps = opts.kronecker_eps;
      ball.status = relation_check(probe).relations.empty() ? "independent" : "dependent";
    }
    Point x(d);
    if (!nonzero.empty() && nonzero.size() <= 8) {
      KroneckerInstance inst;
      inst.dim = d;
      inst.vectors = nonzero;
      inst.targets.assign(nonzero.size(), 0.0);
      inst.eps = opts.kronecker_eps;
      SolveOptions so;
      so.seed = opts.seed + i;
      const AlignmentTrial t = align_phases(inst, nonzero_w, so);
      x = t.solution.t;
      ball.residuals = t.solution.residuals;
      ball.kronecker_success = t.solution.success;
    }
    ball.x = x;
    Complex s = fixed;
    for (std::size_t j = 0; j < nonzero.size(); ++j) s += nonzero_w[j] * unit_phase(dot(nonzero[j], x));
    ball.re_sum = s.real();
    ball.abs_sum = std::abs(s);
    ball.aligned = ball.kronecker_success && ball.re_sum >= 0.5 * ball.weighted_mass &&
                   ball.re_sum <= ball.weighted_mass * (1.0 + 1e-12);
    ball.under_ceiling = ball.abs_sum <= rep.ceiling && 0.5 * ball.core_mass <= rep.ceiling;
    if (ball.status == "dependent") {
      ++rep.dependent;
    } else {
      ++rep.independent;
      rep.alignment_ok = rep.alignment_ok && ball.aligned;
    }
    if (rep.translation_bounded) rep.ceiling_ok = rep.ceiling_ok && ball.under_ceiling;
    rep.max_core_mass = std::max(rep.max_core_mass, ball.core_mass);
    rep.balls.push_back(std::move(ball));
  }
  rep.pass = rep.alignment_ok && rep.ceiling_ok;
  return rep;
}

std::vector<CorpusEntry> builtin_corpus(double window_1d, double window_2d) {
  auto comb = [](int dim, double window, double spacing, Point shift, Point alpha) {
    LatticeCombSpec s;
    s.dim = dim;
    s.window = window;
    s.terms.push_back({Lattice::scaled_integer(dim, spacing), shift, {{Complex{1.0, 0.0}, alpha}}});
    return s;
  };
  return {
      {"unit-comb", comb(1, window_1d, 1.0, Point{0.0}, Point{0.0}), true},
      {"scaled-comb", comb(1, window_1d, 2.0, Point{0.0}, Point{0.0}), true},
      {"shifted-comb", comb(1, window_1d, 1.0, Point{0.5}, Point{0.0}), true},
      {"modulated-comb", comb(1, window_1d, 1.0, Point{0.0}, Point{0.3}), false},
      {"unit-square", comb(2, window_2d, 1.0, Point{0.0, 0.0}, Point{0.0, 0.0}), true},
  };
}

}  // namespace cryst
