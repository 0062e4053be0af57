#pragma once

#include <array>
#include <cmath>

namespace cryst {

/// Truncated Taylor series c_0 + c_1 h + ... + c_N h^N; c_k = f^{(k)} / k!.
/// Forward-mode arithmetic on these gives exact higher derivatives of
/// smooth-step profiles without finite differences.
template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  static Jet variable(double x) {
    Jet j;
    j.c[0] = x;
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }
  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }

  /// k-th derivative value.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int i = 0; i <= N; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int i = 0; i <= N; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (double& v : a.c) v *= s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= N; ++i) {
      for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double s = a.c[k];
      for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }

  /// Derivative as a jet of the same order (top coefficient becomes 0).
  Jet diff() const {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = c[k + 1] * (k + 1);
    return r;
  }
};

template <int N>
Jet<N> exp(const Jet<N>& a) {
  // g = e^a satisfies g' = a' g.
  Jet<N> g;
  g.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * g.c[k - j];
    g.c[k] = s / k;
  }
  return g;
}

}  // namespace cryst
