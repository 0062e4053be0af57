#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <span>
#include <vector>

namespace cryst {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T, class F>
void gk15(F& f, double a, double b, T& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T resk = fc * kWgk[7];
  T resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    resk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
  }
  value = resk * h;
  error = magnitude((resk - resg) * h);
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of f over [a, b].
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |I|).
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                        int max_intervals = 4000) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  QuadResult<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Piece> heap;
  Piece first{a, b, T{}, 0.0};
  detail::gk15<T>(f, a, b, first.value, first.error);
  out.evaluations = 15;
  T total = first.value;
  double err = first.error;
  heap.push(first);
  while (err > std::max(abs_tol, rel_tol * detail::magnitude(total)) &&
         static_cast<int>(heap.size()) < max_intervals) {
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (m <= p.a || m >= p.b) {
      heap.push(p);
      break;
    }
    Piece l{p.a, m, T{}, 0.0}, r{m, p.b, T{}, 0.0};
    detail::gk15<T>(f, l.a, l.b, l.value, l.error);
    detail::gk15<T>(f, r.a, r.b, r.value, r.error);
    out.evaluations += 30;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  total = T{};
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  out.converged = err <= std::max(abs_tol, rel_tol * detail::magnitude(total));
  return out;
}

/// As integrate(), but throws NumericalError when the tolerance is missed.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol = 0.0, int max_intervals = 4000);

/// Integral over the open ball B(center, radius) in dimension 1..3 by nested
/// one-dimensional adaptive quadrature. Returns the integral (not the mean).
QuadResult<std::complex<double>> integrate_ball(
    const std::function<std::complex<double>(std::span<const double>)>& f, int dim,
    std::span<const double> center, double radius, double abs_tol);

}  // namespace cryst
