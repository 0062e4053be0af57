#include "cryst/almost_periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "cryst/errors.hpp"
#include "cryst/quadrature.hpp"
#include "cryst/schwartz.hpp"

namespace cryst {

namespace {

constexpr double kPi = std::numbers::pi;

Complex cis(double turns) {
  const double r = turns - std::floor(turns);
  return std::polar(1.0, 2.0 * kPi * r);
}

}  // namespace

TrigPolynomial::TrigPolynomial(int dim, std::vector<TrigTerm> terms) : dim_(dim) {
  require_dim(dim);
  std::map<Point, Complex, std::less<>> acc;
  for (const TrigTerm& t : terms) {
    if (t.omega.dim() != dim) throw ConfigError("frequency dimension mismatch");
    if (!t.omega.finite() || !std::isfinite(t.a.real()) || !std::isfinite(t.a.imag())) {
      throw ConfigError("non-finite trigonometric term");
    }
    acc[t.omega] += t.a;
  }
  for (const auto& [w, a] : acc) {
    if (a != Complex{}) terms_.push_back({w, a});
  }
}

double TrigPolynomial::abs_sum() const {
  double s = 0.0;
  for (const TrigTerm& t : terms_) s += std::abs(t.a);
  return s;
}

double TrigPolynomial::square_sum() const {
  double s = 0.0;
  for (const TrigTerm& t : terms_) s += std::norm(t.a);
  return s;
}

Complex evaluate(const TrigPolynomial& d, const Point& x) {
  if (x.dim() != d.dim()) throw ConfigError("dimension mismatch");
  Complex s;
  for (const TrigTerm& t : d.terms()) s += t.a * cis(dot(x, t.omega));
  return s;
}

double ball_kernel(int dim, double z) {
  z = std::abs(z);
  switch (dim) {
    case 1:
      return z < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
    case 2:
      return z < 1e-8 ? 1.0 - z * z / 8.0 : 2.0 * std::cyl_bessel_j(1.0, z) / z;
    case 3:
      if (z < 1e-3) return 1.0 - z * z / 10.0 + z * z * z * z / 280.0;
      return 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
    default:
      throw ConfigError("dimension must be 1, 2 or 3");
  }
}

double ball_kernel_constant(int dim) {
  switch (dim) {
    case 1: return 1.0;
    case 2: return 1.1638;
    case 3: return 2.5;
    default: throw ConfigError("dimension must be 1, 2 or 3");
  }
}

double ball_kernel_bound(int dim, double z) {
  z = std::abs(z);
  if (z == 0.0) return 1.0;
  if (dim == 3) return std::min(1.0, 3.0 * (1.0 + z) / (z * z * z));
  return std::min(1.0, ball_kernel_constant(dim) / z);
}

BohrEstimate bohr_coefficient(const TrigPolynomial& d, const Point& omega, double R,
                              const Point& center) {
  if (omega.dim() != d.dim() || center.dim() != d.dim()) throw ConfigError("dimension mismatch");
  if (!(R > 0.0)) throw ConfigError("averaging radius must be positive");
  BohrEstimate out;
  out.averaging_radius = R;
  out.center = center;
  for (const TrigTerm& t : d.terms()) {
    const Point delta = t.omega - omega;
    const double z = 2.0 * kPi * R * delta.norm();
    out.value += t.a * cis(dot(center, delta)) * ball_kernel(d.dim(), z);
    if (delta.norm() > 0.0) out.error_bound += std::abs(t.a) * ball_kernel_bound(d.dim(), z);
  }
  return out;
}

BohrEstimate bohr_coefficient(const std::function<Complex(const Point&)>& f, int dim,
                              const Point& omega, double R, const Point& center, double abs_tol) {
  require_dim(dim);
  if (!(R > 0.0)) throw ConfigError("averaging radius must be positive");
  const double vol = unit_ball_volume(dim) * std::pow(R, dim);
  auto g = [&](std::span<const double> t) {
    const Point p = Point::from(t);
    return f(p) * cis(-dot(p, omega));
  };
  const auto q = integrate_ball(g, dim, center.coords(), R, abs_tol * vol);
  BohrEstimate out;
  out.value = q.value / vol;
  out.error_bound = q.error / vol;
  out.averaging_radius = R;
  out.center = center;
  return out;
}

double richardson_limit(std::span<const double> radii, std::span<const double> values) {
  if (radii.size() != values.size() || radii.empty()) {
    throw ConfigError("richardson fit needs matching non-empty samples");
  }
  if (radii.size() == 1) return values[0];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double x = 1.0 / radii[i];
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return sy / n;
  const double k = (n * sxy - sx * sy) / den;
  return (sy - k * sx) / n;
}

ParsevalReport parseval_check(const TrigPolynomial& d, const std::vector<double>& schedule,
                              const Point& center) {
  if (schedule.empty()) throw ConfigError("empty radius schedule");
  if (center.dim() != d.dim()) throw ConfigError("dimension mismatch");
  ParsevalReport rep;
  rep.limit = d.square_sum();
  const auto terms = d.terms();
  const double kd = ball_kernel_constant(d.dim());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (i == j) continue;
      const double gap = (terms[i].omega - terms[j].omega).norm();
      rep.constant += std::abs(terms[i].a) * std::abs(terms[j].a) * kd / (2.0 * kPi * gap);
    }
  }
  std::vector<double> rs, vs;
  for (double R : schedule) {
    if (!(R > 0.0)) throw ConfigError("averaging radius must be positive");
    ParsevalRow row;
    row.R = R;
    Complex m;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const Point delta = terms[i].omega - terms[j].omega;
        const double z = 2.0 * kPi * R * delta.norm();
        m += terms[i].a * std::conj(terms[j].a) * cis(dot(center, delta)) *
             ball_kernel(d.dim(), z);
        if (i != j) {
          row.error_bound +=
              std::abs(terms[i].a) * std::abs(terms[j].a) * ball_kernel_bound(d.dim(), z);
        }
      }
    }
    row.mean_square = m.real();
    rep.rows.push_back(row);
    rs.push_back(R);
    vs.push_back(row.mean_square);
  }
  rep.extrapolated = richardson_limit(rs, vs);
  return rep;
}

double period_defect(const TrigPolynomial& d, const Point& tau) {
  double s = 0.0;
  for (const TrigTerm& t : d.terms()) s += std::abs(t.a) * std::abs(cis(dot(tau, t.omega)) - 1.0);
  return s;
}

namespace {

double golden_min(const std::function<double(double)>& f, double a, double b, double& fx) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), e = a + g * (b - a);
  double fc = f(c), fe = f(e);
  for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + g * (b - a);
      fe = f(e);
    }
  }
  const double x = fc < fe ? c : e;
  fx = std::min(fc, fe);
  return x;
}

Point compass_min(const TrigPolynomial& d, Point x, double step) {
  double fx = period_defect(d, x);
  while (step > 1e-12) {
    bool moved = false;
    for (int i = 0; i < d.dim(); ++i) {
      for (double s : {step, -step}) {
        Point y = x;
        y[i] += s;
        const double fy = period_defect(d, y);
        if (fy < fx) {
          x = y;
          fx = fy;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

}  // namespace

AlmostPeriodReport almost_periods(const TrigPolynomial& d, double eps, double scan_range,
                                  double scan_pitch) {
  if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(scan_range > 0.0) || !(scan_pitch > 0.0) || scan_pitch > scan_range) {
    throw ConfigError("scan range and pitch must be positive with pitch <= range");
  }
  AlmostPeriodReport rep;
  rep.epsilon = eps;
  rep.scan_range = scan_range;
  rep.scan_pitch = scan_pitch;
  const int dim = d.dim();

  if (dim == 1) {
    const auto n = static_cast<long long>(std::floor(scan_range / scan_pitch));
    if (n > 50'000'000) throw ResourceError("almost-period scan exceeds 5e7 grid points");
    auto f = [&](double t) { return period_defect(d, Point{t}); };
    long long i = 0;
    while (i <= n) {
      if (f(static_cast<double>(i) * scan_pitch) >= eps) {
        ++i;
        continue;
      }
      long long j = i;
      double best_t = static_cast<double>(i) * scan_pitch, best_f = f(best_t);
      while (j + 1 <= n && f(static_cast<double>(j + 1) * scan_pitch) < eps) {
        ++j;
        const double t = static_cast<double>(j) * scan_pitch;
        if (f(t) < best_f) {
          best_f = f(t);
          best_t = t;
        }
      }
      double lo = std::max(0.0, static_cast<double>(i - 1) * scan_pitch);
      double hi = std::min(scan_range, static_cast<double>(j + 1) * scan_pitch);
      double fr = 0.0;
      double t = golden_min(f, lo, hi, fr);
      if (!(fr < eps) || fr > best_f) t = best_t;
      if (i == 0) t = 0.0;
      rep.periods.push_back(Point{t});
      i = j + 1;
    }
    if (rep.periods.empty() || rep.periods.front()[0] != 0.0) {
      rep.periods.insert(rep.periods.begin(), Point{0.0});
    }
    double last = 0.0;
    for (const Point& p : rep.periods) {
      rep.max_gap = std::max(rep.max_gap, p[0] - last);
      last = p[0];
    }
    rep.max_gap = std::max(rep.max_gap, scan_range - last);
    rep.inclusion_length = rep.max_gap;
    return rep;
  }

  const auto m = static_cast<long long>(std::floor(scan_range / scan_pitch));
  const double side = static_cast<double>(2 * m + 1);
  if (std::pow(side, dim) > 4e6) throw ResourceError("almost-period scan exceeds 4e6 grid points");
  using Idx = std::array<long long, 3>;
  std::set<Idx> accepted;
  Idx idx{0, 0, 0};
  auto to_point = [&](const Idx& k) {
    Point p(dim);
    for (int c = 0; c < dim; ++c) p[c] = static_cast<double>(k[static_cast<std::size_t>(c)]) * scan_pitch;
    return p;
  };
  std::function<void(int)> scan = [&](int c) {
    if (c == dim) {
      if (period_defect(d, to_point(idx)) < eps) accepted.insert(idx);
      return;
    }
    for (long long k = -m; k <= m; ++k) {
      idx[static_cast<std::size_t>(c)] = k;
      scan(c + 1);
    }
    idx[static_cast<std::size_t>(c)] = 0;
  };
  scan(0);
  std::set<Idx> seen;
  for (const Idx& start : accepted) {
    if (seen.count(start)) continue;
    std::vector<Idx> stack{start};
    seen.insert(start);
    Idx best = start;
    double best_f = period_defect(d, to_point(start));
    bool has_origin = false;
    while (!stack.empty()) {
      const Idx cur = stack.back();
      stack.pop_back();
      if (cur == Idx{0, 0, 0}) has_origin = true;
      const double fc = period_defect(d, to_point(cur));
      if (fc < best_f) {
        best_f = fc;
        best = cur;
      }
      for (int c = 0; c < dim; ++c) {
        for (long long s : {-1LL, 1LL}) {
          Idx nb = cur;
          nb[static_cast<std::size_t>(c)] += s;
          if (accepted.count(nb) && !seen.count(nb)) {
            seen.insert(nb);
            stack.push_back(nb);
          }
        }
      }
    }
    if (has_origin) {
      rep.periods.push_back(Point(dim));
      continue;
    }
    Point p = compass_min(d, to_point(best), scan_pitch);
    if (!(period_defect(d, p) < eps)) p = to_point(best);
    rep.periods.push_back(p);
  }
  if (std::none_of(rep.periods.begin(), rep.periods.end(),
                   [&](const Point& p) { return p.norm() == 0.0; })) {
    rep.periods.push_back(Point(dim));
  }
  std::sort(rep.periods.begin(), rep.periods.end(),
            [](const Point& a, const Point& b) { return (a <=> b) < 0; });
  // covering radius over a coarser grid of the box
  const double coarse = std::max(scan_pitch, scan_range / 16.0);
  const auto mc = static_cast<long long>(std::floor(scan_range / coarse));
  double cover = 0.0;
  std::function<void(int, Point&)> sweep = [&](int c, Point& p) {
    if (c == dim) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : rep.periods) best = std::min(best, distance(p, q));
      cover = std::max(cover, best);
      return;
    }
    for (long long k = -mc; k <= mc; ++k) {
      p[c] = static_cast<double>(k) * coarse;
      sweep(c + 1, p);
    }
  };
  Point p(dim);
  sweep(0, p);
  rep.max_gap = cover;
  rep.inclusion_length = cover;
  return rep;
}

TrigPolynomial convolution_trig_polynomial(const AtomicMeasure& mu_hat, const TestFunction& phi) {
  if (mu_hat.dim() != phi.dim()) throw ConfigError("dimension mismatch");
  const double support = phi.support_radius();
  std::vector<TrigTerm> terms;
  for (const Atom& a : mu_hat.atoms()) {
    if (a.x.norm() >= support) continue;
    const Complex c = a.mass * evaluate(phi, -a.x);
    if (c != Complex{}) terms.push_back({a.x, c});
  }
  return TrigPolynomial(mu_hat.dim(), std::move(terms));
}

namespace {

// Bound on sum a_lambda phi^(t - lambda) over atoms at distance >= s from t.
double shell_tail(const TestFunction& phi_hat, double c1, int dim, double s) {
  double tail = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double term = c1 * std::pow(s + k + 1.0, dim) * decay_bound(phi_hat, s + k);
    tail += term;
    if (term < 1e-6 * tail && k > 4) break;
  }
  return tail;
}

// Smallest cutoff (step 0.5) whose shell tail is below tol, capped at limit.
double truncation_radius(const TestFunction& phi_hat, double c1, int dim, double tol, double limit) {
  for (double s = 1.0; s < limit; s += 0.5) {
    if (shell_tail(phi_hat, c1, dim, s) <= tol) return s;
  }
  return limit;
}

}  // namespace

CoefficientReport convolution_fourier_coefficients(const AtomicMeasure& mu,
                                                   const AtomicMeasure& mu_hat,
                                                   const TestFunction& phi,
                                                   const std::vector<Point>& probes,
                                                   const CoefficientOptions& opts) {
  const int dim = mu.dim();
  if (mu_hat.dim() != dim || phi.dim() != dim) throw ConfigError("dimension mismatch");
  if (!std::isfinite(phi.support_radius())) {
    throw ConfigError("coefficient check needs a compactly supported test function");
  }
  if (!(opts.R > 0.0)) throw ConfigError("averaging radius must be positive");
  const Point center = opts.center.dim() == dim ? opts.center : Point(dim);
  CoefficientReport rep;
  rep.R = opts.R;
  rep.center = center;

  const TrigPolynomial trig = convolution_trig_polynomial(mu_hat, phi);
  const TestFunction phi_hat = fourier_transform(phi);
  const double c1 = estimate_growth_constant(mu);
  const double room = mu.window() - center.norm() - opts.R;
  if (room < 1.0) {
    throw ConfigError("window too small: need |center| + R + 1 <= W");
  }
  const double cut = truncation_radius(phi_hat, c1, dim, 0.1 * opts.tolerance, room);
  rep.truncation_cutoff = cut;
  rep.truncation_tail = shell_tail(phi_hat, c1, dim, cut);
  const double slack = opts.tolerance + rep.truncation_tail;

  auto direct = [&](const Point& t) {
    Complex s;
    for (const Atom& a : mu.atoms()) {
      const Point diff = t - a.x;
      if (diff.norm() >= cut) continue;
      s += a.mass * fourier(phi, diff);
    }
    return s;
  };

  // pointwise agreement of the two expressions for mu * phi^
  rep.pointwise_samples = opts.pointwise_samples;
  for (std::size_t k = 0; k < opts.pointwise_samples; ++k) {
    Point t = center;
    for (int c = 0; c < dim; ++c) {
      const double u = std::fmod(0.6180339887498949 * static_cast<double>(k + 1) *
                                     (1.0 + 0.41421356237 * c),
                                 1.0);
      t[c] += opts.R * (2.0 * u - 1.0) / std::sqrt(static_cast<double>(dim));
    }
    const double diff = std::abs(evaluate(trig, t) - direct(t));
    rep.pointwise_max_diff = std::max(rep.pointwise_max_diff, diff);
  }

  // quadrature route in d = 1: composite G-K panels, values shared across probes
  std::vector<double> nodes, wk, wg;
  std::vector<Complex> values;
  if (dim == 1 && opts.quadrature_route) {
    double maxfreq = phi.support_radius();
    for (const Point& p : probes) maxfreq = std::max(maxfreq, p.norm() + phi.support_radius());
    const double width = std::min(0.5, 1.0 / (maxfreq + 1.0));
    const double a = center[0] - opts.R;
    const auto panels = static_cast<long long>(std::ceil(2.0 * opts.R / width));
    const double h = 2.0 * opts.R / static_cast<double>(panels);
    for (long long p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      for (int j = 0; j < 15; ++j) {
        const int jj = j < 7 ? j : (j == 7 ? 7 : 14 - j);
        const double sign = j < 7 ? -1.0 : 1.0;
        nodes.push_back(mid + sign * 0.5 * h * detail::kXgk[static_cast<std::size_t>(jj)]);
        wk.push_back(0.5 * h * detail::kWgk[static_cast<std::size_t>(jj)]);
        wg.push_back(jj % 2 == 1 ? 0.5 * h * detail::kWg[static_cast<std::size_t>(jj / 2)] : 0.0);
      }
    }
    values.reserve(nodes.size());
    for (double t : nodes) values.push_back(direct(Point{t}));
  }

  rep.ok = rep.pointwise_max_diff <= slack;
  for (const Point& g : probes) {
    if (g.dim() != dim) throw ConfigError("probe dimension mismatch");
    CoefficientRow row;
    row.gamma = g;
    const BohrEstimate b = bohr_coefficient(trig, g, opts.R, center);
    row.closed_form = b.value;
    row.error_bound = b.error_bound;
    row.expected = Complex{};
    for (const Atom& a : mu_hat.atoms()) {
      if ((a.x - g).norm() <= 1e-9) row.expected = a.mass * evaluate(phi, -a.x);
    }
    if (!values.empty()) {
      Complex k15, g7;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Complex v = values[i] * cis(-nodes[i] * g[0]);
        k15 += wk[i] * v;
        g7 += wg[i] * v;
      }
      row.quadrature = k15 / (2.0 * opts.R);
      row.quadrature_error = std::abs(k15 - g7) / (2.0 * opts.R);
      row.has_quadrature = true;
      const double gap = std::abs(row.quadrature - row.closed_form);
      if (gap > slack + row.quadrature_error) {
        throw NumericalError("closed-form and quadrature Bohr means disagree at " + g.str(), gap);
      }
    }
    row.agree = std::abs(row.closed_form - row.expected) <= row.error_bound + opts.tolerance;
    rep.ok = rep.ok && row.agree;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace cryst
