#include "cryst/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cryst/errors.hpp"

namespace cryst {

AtomicMeasure AtomicMeasure::build(int dim, double window, std::vector<Atom> atoms,
                                   double margin) {
  require_dim(dim);
  if (!(window > 0.0) || !std::isfinite(window)) throw ConfigError("window radius must be positive");
  if (!(margin >= 0.0)) throw ConfigError("margin must be nonnegative");
  for (const Atom& a : atoms) {
    if (a.x.dim() != dim) throw ConfigError("atom dimension does not match measure dimension");
    if (!a.x.finite()) throw ConfigError("atom location is not finite");
    if (!std::isfinite(a.mass.real()) || !std::isfinite(a.mass.imag())) {
      throw ConfigError("atom mass is not finite");
    }
    if (!(a.x.norm() < window)) {
      throw ConfigError("atom at " + a.x.str() + " lies outside the window");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return std::is_lt(a.x <=> b.x); });

  // Near-duplicates differ by less than kMinSeparation in the leading coordinate.
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1;
         j < atoms.size() && atoms[j].x[0] - atoms[i].x[0] < kMinSeparation; ++j) {
      if (atoms[j].x != atoms[i].x && distance(atoms[j].x, atoms[i].x) < kMinSeparation) {
        throw ConfigError("atoms at " + atoms[i].x.str() + " and " + atoms[j].x.str() +
                          " are closer than 1e-12");
      }
    }
  }

  AtomicMeasure m;
  m.dim_ = dim;
  m.window_ = window;
  m.margin_ = margin;
  m.atoms_.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size();) {
    Complex sum = 0.0;
    double abs_sum = 0.0;
    std::size_t j = i;
    for (; j < atoms.size() && atoms[j].x == atoms[i].x; ++j) {
      sum += atoms[j].mass;
      abs_sum += std::abs(atoms[j].mass);
    }
    // Cancellation to rounding level counts as zero.
    bool merged = j - i > 1;
    if (std::abs(sum) > (merged ? 1e-12 * abs_sum : 0.0)) m.atoms_.push_back({atoms[i].x, sum});
    i = j;
  }
  return m;
}

AtomicMeasure AtomicMeasure::with_margin(double margin) const {
  if (!(margin >= 0.0)) throw ConfigError("margin must be nonnegative");
  AtomicMeasure m = *this;
  m.margin_ = margin;
  return m;
}

AtomicMeasure merge(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.dim() != b.dim()) throw ConfigError("cannot merge measures of different dimension");
  std::vector<Atom> atoms(a.atoms().begin(), a.atoms().end());
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return AtomicMeasure::build(a.dim(), std::max(a.window(), b.window()), std::move(atoms),
                              std::max(a.margin(), b.margin()));
}

AtomicMeasure scale(const AtomicMeasure& m, Complex factor) {
  return m.map_masses([factor](Complex z) { return factor * z; });
}

namespace {

// Atoms are sorted by leading coordinate, so a ball query only needs the strip
// |x_0 - c_0| < r.
template <class Fn>
void for_each_in_ball(const AtomicMeasure& mu, const Point& c, double r, Fn&& fn) {
  auto atoms = mu.atoms();
  auto lo = std::upper_bound(atoms.begin(), atoms.end(), c[0] - r,
                             [](double v, const Atom& a) { return v < a.x[0]; });
  for (auto it = lo; it != atoms.end() && it->x[0] < c[0] + r; ++it) {
    if (mu.dim() == 1 || (it->x - c).norm() < r) fn(*it);
  }
}

double variation_value(const AtomicMeasure& mu, const Point& c, double r) {
  double v = 0.0;
  for_each_in_ball(mu, c, r, [&](const Atom& a) { v += std::abs(a.mass); });
  return v;
}

struct Candidate {
  double value;
  Point center;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  return std::is_lt(a.center <=> b.center);
}

}  // namespace

VariationResult variation_on_ball(const AtomicMeasure& mu, const Point& center, double r) {
  if (center.dim() != mu.dim()) throw ConfigError("center dimension does not match measure");
  if (!(r > 0.0)) throw ConfigError("ball radius must be positive");
  return {variation_value(mu, center, r), center.norm() + r > mu.window()};
}

std::size_t count_in_ball(const AtomicMeasure& mu, const Point& center, double r) {
  std::size_t n = 0;
  for_each_in_ball(mu, center, r, [&](const Atom&) { ++n; });
  return n;
}

TranslationBoundReport translation_bound_estimate(const AtomicMeasure& mu, double ball_radius,
                                                  const TranslationBoundOptions& opts) {
  if (!(ball_radius > 0.0)) throw ConfigError("ball radius must be positive");
  if (ball_radius >= mu.window() - mu.margin()) {
    throw ConfigError("ball radius must be smaller than window minus margin");
  }
  const double core = opts.core_radius > 0.0
                          ? std::min(opts.core_radius, mu.window() - ball_radius)
                          : mu.window() - std::max(mu.margin(), ball_radius);
  const int d = mu.dim();

  TranslationBoundReport rep;
  rep.ball_radius = ball_radius;
  Candidate best{-1.0, Point(d)};
  auto consider = [&](const Point& c) {
    ++rep.centers_scanned;
    Candidate cand{variation_value(mu, c, ball_radius), c};
    if (better(cand, best)) best = cand;
  };

  if (d == 1) {
    // The variation is piecewise constant in the center with jumps at
    // x_j +- r; open balls make it lower semicontinuous, so the sup is attained
    // inside a piece or at an end of the admissible interval.
    std::vector<double> breaks{-core, core};
    for (const Atom& a : mu.atoms()) {
      for (double b : {a.x[0] - ball_radius, a.x[0] + ball_radius}) {
        if (b > -core && b < core) breaks.push_back(b);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    consider(Point{-core});
    consider(Point{core});
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      consider(Point{0.5 * (breaks[i] + breaks[i + 1])});
    }
    rep.exact = true;
  } else {
    const double pitch = opts.grid_pitch > 0.0 ? opts.grid_pitch : ball_radius / 4.0;
    rep.grid_pitch = pitch;
    auto admissible = [&](const Point& c) { return c.norm() <= core; };
    for (const Atom& a : mu.atoms()) {
      if (admissible(a.x)) consider(a.x);
    }
    // Midpoints of close pairs catch balls straddling two atoms.
    for (const Atom& a : mu.atoms()) {
      for_each_in_ball(mu, a.x, 2.0 * ball_radius, [&](const Atom& b) {
        if (std::is_lt(a.x <=> b.x)) {
          Point mid = 0.5 * (a.x + b.x);
          if (admissible(mid)) consider(mid);
        }
      });
    }
    const long n = static_cast<long>(std::floor(core / pitch));
    std::array<long, 3> idx{};
    auto scan = [&](auto&& self, int axis) -> void {
      if (axis == d) {
        Point c(d);
        for (int i = 0; i < d; ++i) c[i] = static_cast<double>(idx[i]) * pitch;
        if (admissible(c)) consider(c);
        return;
      }
      for (idx[axis] = -n; idx[axis] <= n; ++idx[axis]) self(self, axis + 1);
    };
    scan(scan, 0);
    // Local refinement around the current maximizer.
    const Point around = best.center;
    const int k = 8;
    const double fine = pitch / k;
    auto refine = [&](auto&& self, int axis, Point c) -> void {
      if (axis == d) {
        if (admissible(c)) consider(c);
        return;
      }
      for (int i = -k; i <= k; ++i) {
        Point cc = c;
        cc[axis] = around[axis] + i * fine;
        self(self, axis + 1, cc);
      }
    };
    refine(refine, 0, around);
  }
  rep.sup_estimate = std::max(best.value, 0.0);
  rep.argmax_center = best.center;
  return rep;
}

GrowthReport fit_loglog(std::vector<double> radii, std::vector<double> values,
                        double residual_threshold) {
  GrowthReport rep;
  rep.radii = std::move(radii);
  rep.variations = std::move(values);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    if (rep.variations[i] > 0.0) {
      lx.push_back(std::log(rep.radii[i]));
      ly.push_back(std::log(rep.variations[i]));
    }
  }
  rep.samples_used = lx.size();
  if (lx.size() < 2) {
    // Zero (or a single nonzero sample): nothing grows.
    rep.fitted_exponent = 0.0;
    rep.fitted_constant = lx.empty() ? 0.0 : std::exp(ly[0]);
    return rep;
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw ConfigError("growth fit needs distinct radii");
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    res = std::max(res, std::abs(ly[i] - (icpt + slope * lx[i])));
  }
  rep.residual = res;
  rep.fitted_constant = std::exp(icpt);
  rep.polynomial = res <= residual_threshold;
  rep.fitted_exponent = rep.polynomial ? slope : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

GrowthReport growth_exponent(const AtomicMeasure& mu, std::vector<double> radii,
                             double residual_threshold) {
  if (radii.size() < 3) throw ConfigError("growth fit needs at least 3 radii");
  std::sort(radii.begin(), radii.end());
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("radii must be positive");
    if (r > mu.window()) throw ConfigError("radius exceeds the window");
  }
  std::vector<double> vars;
  const Point origin(mu.dim());
  for (double r : radii) vars.push_back(variation_value(mu, origin, r));
  return fit_loglog(std::move(radii), std::move(vars), residual_threshold);
}

AtomicMeasure squared_mass_measure(const AtomicMeasure& mu_hat) {
  return mu_hat.map_masses([](Complex b) { return Complex(std::norm(b), 0.0); });
}

AtomicMeasure power_mass_measure(const AtomicMeasure& mu_hat, double q) {
  if (!(q > 0.0)) throw ConfigError("power must be positive");
  return mu_hat.map_masses([q](Complex b) { return Complex(std::pow(std::abs(b), q), 0.0); });
}

PartialMassBound partial_mass_bound_check(const AtomicMeasure& mu_hat, double r) {
  if (!(r > 0.0)) throw ConfigError("radius must be positive");
  if (r > mu_hat.window()) throw ConfigError("radius exceeds the window");
  PartialMassBound out;
  double sq = 0.0;
  for_each_in_ball(mu_hat, Point(mu_hat.dim()), r, [&](const Atom& a) {
    out.lhs += std::abs(a.mass);
    sq += std::norm(a.mass);
    ++out.count;
  });
  out.rhs = std::sqrt(sq * static_cast<double>(out.count));
  // Rounding slack only; the inequality itself is exact.
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

BoundednessCheck looks_translation_bounded(const AtomicMeasure& mu) {
  BoundednessCheck chk;
  const double core = mu.window() - std::max(mu.margin(), 1.0);
  if (core < 4.0) {
    throw ConfigError("window too small to assess translation boundedness");
  }
  if (mu.empty()) return chk;
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(core / 8.0 * std::pow(8.0, i / 7.0));
  GrowthReport g = growth_exponent(mu, radii);
  chk.growth_exponent = g.fitted_exponent;
  TranslationBoundOptions inner;
  inner.core_radius = 0.5 * core;
  chk.inner_sup = translation_bound_estimate(mu, 1.0, inner).sup_estimate;
  chk.outer_sup = translation_bound_estimate(mu, 1.0).sup_estimate;
  if (!g.polynomial) {
    chk.bounded = false;
    chk.reason = "variation growth is not polynomial";
  } else if (g.fitted_exponent > mu.dim() + 0.1) {
    chk.bounded = false;
    chk.reason = "variation grows faster than r^d";
  } else if (chk.outer_sup > 1.5 * chk.inner_sup) {
    chk.bounded = false;
    chk.reason = "unit-ball variation increases towards the window edge";
  }
  return chk;
}

}  // namespace cryst
