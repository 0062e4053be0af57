#include "cryst/schwartz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cryst/errors.hpp"

namespace cryst {

namespace {

std::vector<Point> default_centers(const AtomicMeasure& mu) {
  // A deterministic low-discrepancy spread over half the core.
  const int d = mu.dim();
  const double core = 0.5 * (mu.window() - std::max(mu.margin(), 1.0));
  std::vector<Point> out{Point(d)};
  const double g[3] = {0.7548776662466927, 0.5698402909980532, 0.4301597090019468};
  for (int i = 1; i <= 64; ++i) {
    Point c(d);
    for (int j = 0; j < d; ++j) {
      const double u = std::fmod(0.5 + g[j] * i, 1.0);
      c[j] = (2.0 * u - 1.0) * core / std::sqrt(static_cast<double>(d));
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

double estimate_growth_constant(const AtomicMeasure& mu, std::vector<Point> centers) {
  if (centers.empty()) centers = default_centers(mu);
  const int d = mu.dim();
  double c1 = 0.0;
  for (const Point& c : centers) {
    const double room = mu.window() - c.norm();
    if (room <= 0.0) continue;
    for (double r = 0.125; r < room; r *= 1.25) {
      const double v = variation_on_ball(mu, c, r).value;
      c1 = std::max(c1, v / std::pow(std::max(1.0, r), d));
    }
    // Radii just above 1 pick up the extra atoms of the closed unit ball.
    for (double r : {1.0 + 1e-9, 1.5 + 1e-9, 2.0 + 1e-9}) {
      if (r < room) c1 = std::max(c1, variation_on_ball(mu, c, r).value / std::pow(r, d));
    }
  }
  return c1;
}

ConvolutionValue convolve_measure(const AtomicMeasure& mu, const TestFunction& phi, const Point& x,
                                  std::optional<double> growth_constant) {
  if (x.dim() != mu.dim() || phi.dim() != mu.dim()) {
    throw ConfigError("dimension mismatch in convolution");
  }
  ConvolutionValue out;
  const double support = phi.support_radius();
  for (const Atom& a : mu.atoms()) {
    const Point diff = x - a.x;
    if (diff.norm() >= support) continue;
    out.value += a.mass * evaluate(phi, diff);
  }
  // Atoms outside the window sit at distance >= W - |x| from x; shell k holds
  // at most C1 (rho0 + k + 1)^d mass.
  const double rho0 = std::max(0.0, mu.window() - x.norm());
  if (rho0 >= support) return out;
  const double c1 = growth_constant ? *growth_constant : estimate_growth_constant(mu);
  const int d = mu.dim();
  double tail = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double s = rho0 + k;
    if (s >= support) break;
    const double term = c1 * std::pow(s + 1.0, d) * decay_bound(phi, s);
    tail += term;
    if (term < 1e-18 * std::max(1.0, tail) && k > 4) break;
  }
  out.tail_bound = tail;
  return out;
}

Prop3Certificate prop3_certificate(const AtomicMeasure& mu, const TestFunction& phi,
                                   const std::vector<Point>& sample_points) {
  const BoundednessCheck tb = looks_translation_bounded(mu);
  if (!tb.bounded) throw CheckRefused("measure is not translation bounded: " + tb.reason);
  const int d = mu.dim();
  Prop3Certificate cert;
  std::vector<Point> centers = default_centers(mu);
  for (const Point& p : sample_points) {
    if (p.norm() < mu.window()) centers.push_back(p);
  }
  cert.c1 = estimate_growth_constant(mu, centers);
  cert.c2 = decay_constant(phi, d + 1).value;
  cert.bound = (d + 1) * cert.c1 * cert.c2;
  for (const Point& x : sample_points) {
    const double v = std::abs(convolve_measure(mu, phi, x, cert.c1).value);
    ++cert.probes;
    if (v > cert.observed_sup) {
      cert.observed_sup = v;
      cert.argmax = x;
    }
  }
  cert.margin = cert.bound - cert.observed_sup;
  cert.holds = cert.observed_sup <= cert.bound;
  return cert;
}

Prop2Certificate prop2_certificate(const BumpAutocorrelation& psi, const AtomicMeasure& mu,
                                   const AtomicMeasure& mu_hat,
                                   const std::vector<Point>& trial_centers) {
  for (const Atom& a : mu.atoms()) {
    if (a.mass.real() < 0.0 || std::abs(a.mass.imag()) > 1e-12 * std::abs(a.mass)) {
      throw ConfigError("ball-mass certificate needs a nonnegative measure");
    }
  }
  const int d = mu.dim();
  const TestFunction phi(d, psi);
  Prop2Certificate cert;

  // phi^ = |psi^|^2 is maximal at the origin for psi >= 0; a coarse grid search
  // confirms the maximizer.
  Point x0(d);
  double peak = fourier(phi, x0).real();
  {
    const double step = 0.05;
    std::array<int, 3> idx{};
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == d) {
        Point c(d);
        for (int i = 0; i < d; ++i) c[i] = idx[i] * step;
        const double v = fourier(phi, c).real();
        if (v > peak) {
          peak = v;
          x0 = c;
        }
        return;
      }
      for (idx[axis] = -4; idx[axis] <= 4; ++idx[axis]) self(self, axis + 1);
    };
    rec(rec, 0);
  }
  if (!(peak > 0.0)) throw NumericalError("phi^ has no positive maximum", peak);

  // |grad phi^| <= 2 pi int |t| phi(t) dt <= 2 pi (2 radius) phi^(0).
  const double lip = 4.0 * std::numbers::pi * psi.radius * fourier(phi, Point(d)).real();
  cert.lipschitz = lip;
  cert.eta = 0.5 * peak;
  cert.x0 = x0;
  // Largest r (shrinking by 0.8) whose grid check with Lipschitz slack passes.
  // phi^ is radial, so when x0 is the origin a radial grid suffices.
  const bool radial = x0.norm() == 0.0;
  for (double r = 1.0; r > 1e-6; r *= 0.8) {
    const int n = 40;
    const double h = r / n;
    double lo = peak;
    if (radial || d == 1) {
      for (int i = -n; i <= n; ++i) {
        if (radial && i < 0) continue;
        Point c = x0;
        c[0] += i * h;
        lo = std::min(lo, fourier(phi, c).real());
      }
      lo -= lip * h / 2.0;
    } else {
      std::array<int, 3> idx{};
      auto rec = [&](auto&& self, int axis) -> void {
        if (axis == d) {
          Point c = x0;
          for (int i = 0; i < d; ++i) c[i] += idx[i] * h;
          if ((c - x0).norm() <= r + h) lo = std::min(lo, fourier(phi, c).real());
          return;
        }
        for (idx[axis] = -n; idx[axis] <= n; ++idx[axis]) self(self, axis + 1);
      };
      rec(rec, 0);
      lo -= lip * h * std::sqrt(static_cast<double>(d)) / 2.0;
    }
    if (lo > cert.eta) {
      cert.r = r;
      break;
    }
  }
  if (cert.r == 0.0) throw NumericalError("no ball with phi^ > eta found", cert.eta);

  cert.max_phi = evaluate(phi, Point(d)).real();
  cert.hat_mu_ball_mass = variation_on_ball(mu_hat, Point(d), 2.0 * psi.radius).value;
  cert.rhs = cert.max_phi * cert.hat_mu_ball_mass / cert.eta;
  for (const Point& t : trial_centers) {
    const double lhs = variation_on_ball(mu, t, cert.r).value;
    ++cert.probes;
    if (cert.probes == 1 || lhs > cert.max_lhs) {
      cert.max_lhs = lhs;
      cert.worst_center = t;
    }
  }
  cert.margin = cert.rhs - cert.max_lhs;
  cert.holds = cert.max_lhs <= cert.rhs;
  return cert;
}

}  // namespace cryst
