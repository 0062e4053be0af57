#include "cryst/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

#include "cryst/errors.hpp"
#include "cryst/jet.hpp"
#include "cryst/lattice.hpp"
#include "cryst/quadrature.hpp"

namespace cryst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourierTol = 1e-10;
constexpr double kFdStep = 1e-5;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double plateau_profile(const PlateauBump& p, double r) {
  return smooth_step((p.r_out - r) / (p.r_out - p.r_in));
}

double bump_profile(double radius, double r) { return standard_bump(r / radius); }

double plateau_fourier_radial(int dim, const PlateauBump& p, double rho) {
  const double breaks[] = {p.r_in};
  return radial_fourier([&](double r) { return plateau_profile(p, r); }, dim, rho, p.r_out,
                        breaks, kFourierTol);
}

double bump_fourier_radial(int dim, double radius, double rho) {
  return radial_fourier([&](double r) { return bump_profile(radius, r); }, dim, rho, radius, {},
                        kFourierTol * 1e-2);
}

// Autocorrelation profile phi(s) = int psi(y - t) psi(t) dt with |y| = s,
// reduced to the axis through y by rotational symmetry.
double autocorr_profile(int dim, double radius, double s) {
  s = std::abs(s);
  if (s >= 2.0 * radius) return 0.0;
  auto psi = [radius](double r) { return bump_profile(radius, r); };
  const double lo = s - radius, hi = radius;
  if (dim == 1) {
    return integrate_or_throw([&](double t) { return psi(std::abs(s - t)) * psi(std::abs(t)); },
                              lo, hi, 1e-14, 1e-13);
  }
  auto outer = [&](double t1) {
    const double h2 = std::min(radius * radius - t1 * t1, radius * radius - (s - t1) * (s - t1));
    if (h2 <= 0.0) return 0.0;
    auto inner = [&](double rho) {
      const double w = dim == 2 ? 2.0 : 2.0 * kPi * rho;
      return w * psi(std::hypot(s - t1, rho)) * psi(std::hypot(t1, rho));
    };
    return integrate<double>(inner, 0.0, std::sqrt(h2), 1e-15, 1e-13).value;
  };
  return integrate_or_throw(outer, lo, hi, 1e-14, 1e-12);
}

template <int N>
Jet<N> smooth_step_jet(const Jet<N>& u) {
  const Jet<N> one = Jet<N>::constant(1.0);
  const Jet<N> fu = exp(Jet<N>::constant(-1.0) / u);
  const Jet<N> fv = exp(Jet<N>::constant(-1.0) / (one - u));
  return fu / (fu + fv);
}

// Delta^k of the plateau profile at radius r, from an order-8 jet.
double plateau_laplacian(int dim, const PlateauBump& p, int k, double r) {
  const double w = p.r_out - p.r_in;
  const double u0 = (p.r_out - r) / w;
  if (k == 0) return smooth_step(u0);
  // e^{-1/u} is flat to double precision this close to the ends.
  if (u0 < 2e-3 || u0 > 1.0 - 2e-3) return 0.0;
  using J = Jet<8>;
  J u = J::constant(u0);
  u.c[1] = -1.0 / w;
  J h = smooth_step_jet(u);
  const J rj = J::variable(r);
  for (int i = 0; i < k; ++i) {
    const J d1 = h.diff();
    h = d1.diff();
    if (dim > 1) h = h + static_cast<double>(dim - 1) * (d1 / rj);
  }
  return h.c[0];
}

struct RadialDerivs {
  double g, g1, g2, err;
};

RadialDerivs radial_fd(const std::function<double(double)>& g, double r, int m) {
  RadialDerivs out{g(r), 0.0, 0.0, 0.0};
  if (m == 0) return out;
  auto gg = [&](double x) { return g(std::abs(x)); };  // even extension
  auto d1 = [&](double h) { return (gg(r + h) - gg(r - h)) / (2.0 * h); };
  auto d2 = [&](double h) { return (gg(r + h) - 2.0 * out.g + gg(r - h)) / (h * h); };
  out.g1 = d1(kFdStep);
  out.err = std::abs(out.g1 - d1(2.0 * kFdStep));
  if (m >= 2) {
    out.g2 = d2(kFdStep);
    out.err = std::max(out.err, std::abs(out.g2 - d2(2.0 * kFdStep)));
  }
  return out;
}

// Golden-section maximization of a unimodal-ish f on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double& arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  arg = fc > fd ? c : d;
  return std::max(fc, fd);
}

// sup of f over [0, hi] by grid plus golden refinement around the best peaks.
double sup_1d(const std::function<double(double)>& f, double hi, double pitch, double& arg,
              double lo = 0.0) {
  const long n = std::max<long>(2, static_cast<long>(std::ceil((hi - lo) / pitch)));
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) vals[static_cast<std::size_t>(i)] = f(lo + h * static_cast<double>(i));
  std::vector<long> peaks;
  for (long i = 0; i <= n; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const bool left = i == 0 || v >= vals[static_cast<std::size_t>(i - 1)];
    const bool right = i == n || v >= vals[static_cast<std::size_t>(i + 1)];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](long a, long b) {
    return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)];
  });
  if (peaks.size() > 4) peaks.resize(4);
  double best = -1.0;
  for (long i = 0; i <= n; ++i) {
    if (vals[static_cast<std::size_t>(i)] > best) {
      best = vals[static_cast<std::size_t>(i)];
      arg = lo + h * static_cast<double>(i);
    }
  }
  for (long i : peaks) {
    double a = std::max(lo, lo + h * static_cast<double>(i - 1));
    double b = std::min(hi, lo + h * static_cast<double>(i + 1));
    double x = 0.0;
    double v = golden_max(f, a, b, x);
    if (v > best) {
      best = v;
      arg = x;
    }
  }
  return best;
}

std::function<double(double)> radial_profile(const TestFunction& phi) {
  const int d = phi.dim();
  return std::visit(
      overloaded{
          [](const GaussianModulated& g) -> std::function<double(double)> {
            return [g](double r) { return std::abs(g.amplitude) * std::exp(-kPi * g.a * r * r); };
          },
          [](const PlateauBump& p) -> std::function<double(double)> {
            return [p](double r) { return plateau_profile(p, r); };
          },
          [d](const BumpAutocorrelation& b) -> std::function<double(double)> {
            return [d, b](double r) { return autocorr_profile(d, b.radius, r); };
          },
          [d](const PlateauTransform& p) -> std::function<double(double)> {
            return [d, p](double r) {
              return plateau_fourier_radial(d, PlateauBump{p.r_in, p.r_out}, r);
            };
          }},
      phi.variant());
}

Point origin_like(const TestFunction& phi) { return Point(phi.dim()); }

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double standard_bump(double u) {
  const double s = 1.0 - u * u;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
  }
  throw ConfigError("unsupported dimension");
}

double unit_sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
  }
  throw ConfigError("unsupported dimension");
}

double radial_fourier(const std::function<double(double)>& g, int dim, double rho,
                      double support, std::span<const double> breaks, double abs_tol) {
  require_dim(dim);
  const double w = 2.0 * kPi * rho;
  std::function<double(double)> f;
  switch (dim) {
    case 1:
      f = [&](double r) { return 2.0 * g(r) * std::cos(w * r); };
      break;
    case 2:
      f = [&](double r) { return 2.0 * kPi * g(r) * std::cyl_bessel_j(0.0, w * r) * r; };
      break;
    default:
      f = [&](double r) {
        const double z = w * r;
        const double sinc = std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
        return 4.0 * kPi * g(r) * r * r * sinc;
      };
  }
  std::vector<double> pts{0.0};
  for (double b : breaks) {
    if (b > 0.0 && b < support) pts.push_back(b);
  }
  pts.push_back(support);
  // Oscillatory integrands need more panels; seed them by splitting per period.
  const double period = rho > 0.0 ? 1.0 / rho : support;
  double total = 0.0, err = 0.0;
  const double tol = abs_tol / static_cast<double>(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) / period)));
    for (int c = 0; c < chunks; ++c) {
      const double ca = a + (b - a) * c / chunks, cb = a + (b - a) * (c + 1) / chunks;
      auto res = integrate<double>(f, ca, cb, tol / chunks, 0.0, 4000);
      total += res.value;
      err += res.error;
    }
  }
  if (err > abs_tol) throw NumericalError("radial Fourier quadrature did not converge", err);
  return total;
}

std::array<double, 4> plateau_laplacian_l1(int dim, const PlateauBump& p) {
  thread_local std::map<std::tuple<int, double, double>, std::array<double, 4>> memo;
  const auto key = std::make_tuple(dim, p.r_in, p.r_out);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::array<double, 4> out{};
  const double omega = unit_sphere_area(dim);
  for (int k = 0; k <= 3; ++k) {
    auto f = [&](double r) {
      return omega * std::abs(plateau_laplacian(dim, p, k, r)) * std::pow(r, dim - 1);
    };
    double v = integrate<double>(f, p.r_in, p.r_out, 1e-12, 1e-10, 8000).value;
    if (k == 0) v += unit_ball_volume(dim) * std::pow(p.r_in, dim);
    out[static_cast<std::size_t>(k)] = v;
  }
  memo.emplace(key, out);
  return out;
}

TestFunction::TestFunction(int dim, Variant v) : dim_(dim), v_(std::move(v)) {
  require_dim(dim);
  std::visit(overloaded{
                 [&](GaussianModulated& g) {
                   if (!(g.a > 0.0)) throw ConfigError("gaussian scale must be positive");
                   if (g.center.dim() == 0) g.center = Point(dim);
                   if (g.modulation.dim() == 0) g.modulation = Point(dim);
                   if (g.center.dim() != dim || g.modulation.dim() != dim) {
                     throw ConfigError("gaussian center/modulation dimension mismatch");
                   }
                 },
                 [](PlateauBump& p) {
                   if (!(p.r_in > 0.0 && p.r_in < p.r_out)) {
                     throw ConfigError("plateau needs 0 < r_in < r_out");
                   }
                 },
                 [](BumpAutocorrelation& b) {
                   if (!(b.radius > 0.0 && b.radius <= 1.0)) {
                     throw ConfigError("autocorrelation bump radius must lie in (0, 1]");
                   }
                 },
                 [](PlateauTransform& p) {
                   if (!(p.r_in > 0.0 && p.r_in < p.r_out)) {
                     throw ConfigError("plateau needs 0 < r_in < r_out");
                   }
                 }},
             v_);
}

TestFunction TestFunction::gaussian(int dim, double a) {
  return TestFunction(dim, GaussianModulated{a, Point(dim), Point(dim), 1.0});
}

TestFunction TestFunction::plateau(int dim, double r_in, double r_out) {
  return TestFunction(dim, PlateauBump{r_in, r_out});
}

TestFunction TestFunction::autocorrelation(int dim, double radius) {
  return TestFunction(dim, BumpAutocorrelation{radius});
}

std::string TestFunction::kind() const {
  return std::visit(overloaded{[](const GaussianModulated&) { return "gaussian"; },
                               [](const PlateauBump&) { return "plateau"; },
                               [](const BumpAutocorrelation&) { return "autocorr"; },
                               [](const PlateauTransform&) { return "plateau_hat"; }},
                    v_);
}

bool TestFunction::radial() const {
  if (const auto* g = std::get_if<GaussianModulated>(&v_)) {
    return g->center.norm() == 0.0 && g->modulation.norm() == 0.0 && g->amplitude.imag() == 0.0;
  }
  return true;
}

double TestFunction::support_radius() const {
  return std::visit(overloaded{[](const GaussianModulated&) {
                                 return std::numeric_limits<double>::infinity();
                               },
                               [](const PlateauBump& p) { return p.r_out; },
                               [](const BumpAutocorrelation& b) { return 2.0 * b.radius; },
                               [](const PlateauTransform&) {
                                 return std::numeric_limits<double>::infinity();
                               }},
                    v_);
}

Complex evaluate(const TestFunction& phi, const Point& y) {
  if (y.dim() != phi.dim()) throw ConfigError("point dimension does not match test function");
  const int d = phi.dim();
  return std::visit(
      overloaded{[&](const GaussianModulated& g) -> Complex {
                   const double r2 = (y - g.center).norm2();
                   return g.amplitude * std::exp(-kPi * g.a * r2) * unit_phase(dot(g.modulation, y));
                 },
                 [&](const PlateauBump& p) -> Complex { return plateau_profile(p, y.norm()); },
                 [&](const BumpAutocorrelation& b) -> Complex {
                   return autocorr_profile(d, b.radius, y.norm());
                 },
                 [&](const PlateauTransform& p) -> Complex {
                   return plateau_fourier_radial(d, PlateauBump{p.r_in, p.r_out}, y.norm());
                 }},
      phi.variant());
}

Complex fourier(const TestFunction& phi, const Point& x) {
  if (x.dim() != phi.dim()) throw ConfigError("point dimension does not match test function");
  const int d = phi.dim();
  return std::visit(
      overloaded{[&](const GaussianModulated& g) -> Complex {
                   // Shift y0 -> phase e^{-2 pi i <x - x0, y0>}; modulation x0 -> shift.
                   const Point dx = x - g.modulation;
                   return g.amplitude * std::pow(g.a, -0.5 * d) *
                          std::exp(-kPi * dx.norm2() / g.a) * unit_phase(-dot(dx, g.center));
                 },
                 [&](const PlateauBump& p) -> Complex {
                   return plateau_fourier_radial(d, p, x.norm());
                 },
                 [&](const BumpAutocorrelation& b) -> Complex {
                   const double s = bump_fourier_radial(d, b.radius, x.norm());
                   return s * s;
                 },
                 [&](const PlateauTransform& p) -> Complex {
                   // The plateau is even, so the inverse and forward transforms agree.
                   return plateau_profile(PlateauBump{p.r_in, p.r_out}, x.norm());
                 }},
      phi.variant());
}

TestFunction fourier_transform(const TestFunction& phi) {
  const int d = phi.dim();
  return std::visit(
      overloaded{[&](const GaussianModulated& g) {
                   GaussianModulated h;
                   h.a = 1.0 / g.a;
                   h.center = g.modulation;
                   h.modulation = -g.center;
                   h.amplitude = g.amplitude * std::pow(g.a, -0.5 * d) *
                                 unit_phase(dot(g.modulation, g.center));
                   return TestFunction(d, h);
                 },
                 [&](const PlateauBump& p) { return TestFunction(d, PlateauTransform{p.r_in, p.r_out}); },
                 [&](const BumpAutocorrelation&) -> TestFunction {
                   throw ConfigError("autocorrelation transform has no closed form in the family");
                 },
                 [&](const PlateauTransform& p) { return TestFunction(d, PlateauBump{p.r_in, p.r_out}); }},
      phi.variant());
}

double decay_bound(const TestFunction& phi, double rho) {
  const int d = phi.dim();
  return std::visit(
      overloaded{[&](const GaussianModulated& g) {
                   const double s = std::max(0.0, rho - g.center.norm());
                   return std::abs(g.amplitude) * std::exp(-kPi * g.a * s * s);
                 },
                 [&](const PlateauBump& p) { return rho < p.r_out ? 1.0 : 0.0; },
                 [&](const BumpAutocorrelation& b) {
                   return rho < 2.0 * b.radius ? autocorr_profile(d, b.radius, 0.0) : 0.0;
                 },
                 [&](const PlateauTransform& p) {
                   // |phi^(xi)| <= ||Delta^k phi||_1 / (2 pi |xi|)^{2k}.
                   const auto l1 = plateau_laplacian_l1(d, PlateauBump{p.r_in, p.r_out});
                   double best = l1[0];
                   if (rho > 0.0) {
                     for (int k = 1; k <= 3; ++k) {
                       best = std::min(best, l1[static_cast<std::size_t>(k)] /
                                                 std::pow(2.0 * kPi * rho, 2 * k));
                     }
                   }
                   return best;
                 }},
      phi.variant());
}

namespace {

NormEstimate gaussian_norm(const TestFunction& phi, const GaussianModulated& g, int m) {
  const int d = phi.dim();
  const double amp = std::abs(g.amplitude);
  // |D^k phi| / |phi| from G_j = -2 pi a (t_j - y0_j) + 2 pi i x0_j.
  auto objective = [&](const Point& t) {
    const Point u = t - g.center;
    const double base = amp * std::exp(-kPi * g.a * u.norm2());
    double best = 1.0;
    std::array<Complex, 3> G{};
    for (int j = 0; j < d; ++j) G[j] = Complex(-2.0 * kPi * g.a * u[j], 2.0 * kPi * g.modulation[j]);
    if (m >= 1) {
      for (int j = 0; j < d; ++j) best = std::max(best, std::abs(G[j]));
    }
    if (m >= 2) {
      for (int j = 0; j < d; ++j) {
        for (int l = j; l < d; ++l) {
          Complex v = G[j] * G[l];
          if (j == l) v -= 2.0 * kPi * g.a;
          best = std::max(best, std::abs(v));
        }
      }
    }
    return std::max(1.0, std::pow(t.norm(), m)) * base * best;
  };
  const double span = std::sqrt(45.0 / (kPi * g.a)) + 1.0;
  const double pitch = d == 1 ? 1e-3 : (d == 2 ? 0.02 : 0.05);
  const long n = static_cast<long>(std::ceil(span / pitch));
  NormEstimate out;
  out.argmax = g.center;
  out.value = objective(g.center);
  std::array<long, 3> idx{};
  std::vector<std::pair<double, Point>> top;
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      Point t = g.center;
      for (int i = 0; i < d; ++i) t[i] += static_cast<double>(idx[i]) * pitch;
      const double v = objective(t);
      if (top.size() < 4 || v > top.back().first) {
        top.emplace_back(v, t);
        std::sort(top.begin(), top.end(), [](auto& a, auto& b) { return a.first > b.first; });
        if (top.size() > 4) top.pop_back();
      }
      return;
    }
    for (idx[axis] = -n; idx[axis] <= n; ++idx[axis]) self(self, axis + 1);
  };
  rec(rec, 0);
  for (auto& [v0, t0] : top) {
    Point t = t0;
    double v = v0;
    for (double step = pitch; step > 1e-11; step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (int j = 0; j < d; ++j) {
          for (double s : {step, -step}) {
            Point c = t;
            c[j] += s;
            const double cv = objective(c);
            if (cv > v) {
              v = cv;
              t = c;
              moved = true;
            }
          }
        }
      }
    }
    if (v > out.value) {
      out.value = v;
      out.argmax = t;
    }
  }
  // Beyond |t - y0| >= span every factor is dominated by a decreasing bound.
  auto tail_at = [&](double s) {
    const double p1 = 2.0 * kPi * g.a * s + 2.0 * kPi * g.modulation.norm();
    const double pm = m == 0 ? 1.0 : (m == 1 ? std::max(1.0, p1) : std::max({1.0, p1, 2.0 * kPi * g.a + p1 * p1}));
    return amp * std::max(1.0, std::pow(s + g.center.norm(), m)) * pm * std::exp(-kPi * g.a * s * s);
  };
  for (double s = span; s < span + 20.0 / std::sqrt(g.a); s += 0.01) {
    out.tail_bound = std::max(out.tail_bound, tail_at(s));
  }
  out.value = std::max(out.value, out.tail_bound);
  return out;
}

NormEstimate radial_norm(const TestFunction& phi, int m) {
  if (std::holds_alternative<PlateauTransform>(phi.variant()) && m > 0) {
    throw ConfigError("derivative norms of plateau_hat are not available");
  }
  const int d = phi.dim();
  const auto g = radial_profile(phi);
  const double hi = phi.support_radius();
  if (!std::isfinite(hi)) throw ConfigError("radial norm needs compact support");
  double fd_err = 0.0;
  auto objective = [&](double r) {
    const RadialDerivs rd = radial_fd(g, r, m);
    double best = std::abs(rd.g);
    if (m >= 1) best = std::max(best, std::abs(rd.g1));
    if (m >= 2) {
      best = std::max(best, std::abs(rd.g2));
      if (d >= 2) best = std::max(best, r > 1e-6 ? std::abs(rd.g1 / r) : std::abs(rd.g2));
    }
    return std::max(1.0, std::pow(r, m)) * best;
  };
  double arg = 0.0;
  NormEstimate out;
  const double pitch = std::holds_alternative<BumpAutocorrelation>(phi.variant()) ? 5e-3 : 1e-3;
  out.value = sup_1d(objective, hi, pitch, arg);
  fd_err = radial_fd(g, arg, m).err * std::max(1.0, std::pow(arg, m));
  out.error = fd_err;
  out.argmax = origin_like(phi);
  out.argmax[0] = arg;
  return out;
}

}  // namespace

NormEstimate schwartz_norm(const TestFunction& phi, int m) {
  if (m < 0 || m > 2) throw ConfigError("schwartz norm order must be 0, 1 or 2");
  NormEstimate best;
  best.argmax = origin_like(phi);
  best.value = -1.0;
  // N_m dominates N_{m-1} pointwise, so carry the running maximum.
  for (int k = 0; k <= m; ++k) {
    NormEstimate e;
    if (const auto* g = std::get_if<GaussianModulated>(&phi.variant())) {
      e = gaussian_norm(phi, *g, k);
    } else {
      e = radial_norm(phi, k);
    }
    if (e.value > best.value) {
      best.value = e.value;
      best.argmax = e.argmax;
    }
    best.error = std::max(best.error, e.error);
    best.tail_bound = std::max(best.tail_bound, e.tail_bound);
  }
  return best;
}

NormEstimate decay_constant(const TestFunction& phi, int power) {
  if (power < 0) throw ConfigError("decay power must be nonnegative");
  NormEstimate out;
  out.argmax = origin_like(phi);
  double arg = 0.0;
  const auto weight = [power](double r) { return std::max(1.0, std::pow(r, power)); };
  if (const auto* g = std::get_if<GaussianModulated>(&phi.variant())) {
    // |phi| depends on |t - y0|; along the ray through y0 it is largest for given |t|.
    const double c = g->center.norm();
    const double amp = std::abs(g->amplitude);
    auto f = [&](double r) { return amp * std::exp(-kPi * g->a * (r - c) * (r - c)) * weight(r); };
    const double hi = c + std::sqrt(power / (kPi * g->a)) + 7.0 / std::sqrt(g->a);
    out.value = sup_1d(f, hi, 1e-3, arg);
    out.tail_bound = f(hi);
  } else if (const auto* p = std::get_if<PlateauTransform>(&phi.variant())) {
    const int d = phi.dim();
    const auto l1 = plateau_laplacian_l1(d, PlateauBump{p->r_in, p->r_out});
    auto tail = [&](double rho) {
      double best = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= 3; ++k) {
        if (2 * k > power) {
          best = std::min(best, l1[static_cast<std::size_t>(k)] * std::pow(rho, power - 2 * k) /
                                    std::pow(2.0 * kPi, 2 * k));
        }
      }
      return best;
    };
    if (power >= 6) throw ConfigError("plateau_hat decay bound supports powers below 6");
    const PlateauBump pb{p->r_in, p->r_out};
    auto f = [&](double r) {
      return std::abs(plateau_fourier_radial(d, pb, r)) * weight(r);
    };
    double hi = 8.0 / (p->r_out - p->r_in);
    const double pitch = 1.0 / (40.0 * p->r_out);
    out.value = sup_1d(f, hi, pitch, arg);
    // beyond hi the analytic tail bound must fall below the scanned sup
    while (tail(hi) > out.value && hi < 4096.0) {
      double a2 = 0.0;
      const double v = sup_1d(f, 2.0 * hi, pitch, a2, hi);
      hi *= 2.0;
      if (v > out.value) {
        out.value = v;
        arg = a2;
      }
    }
    out.tail_bound = tail(hi);
    out.error = kFourierTol * weight(hi);
  } else {
    const auto g = radial_profile(phi);
    auto f = [&](double r) { return std::abs(g(r)) * weight(r); };
    out.value = sup_1d(f, phi.support_radius(), 1e-3, arg);
  }
  out.value = std::max(out.value, out.tail_bound);
  out.argmax[0] = arg;
  return out;
}

}  // namespace cryst
