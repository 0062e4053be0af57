#include "cryst/quadrature.hpp"

#include <array>

#include "cryst/errors.hpp"

namespace cryst {

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_intervals) {
  auto res = integrate<double>(f, a, b, abs_tol, rel_tol, max_intervals);
  if (!res.converged) {
    throw NumericalError("adaptive quadrature did not reach tolerance", res.error);
  }
  return res.value;
}

QuadResult<std::complex<double>> integrate_ball(
    const std::function<std::complex<double>(std::span<const double>)>& f, int dim,
    std::span<const double> center, double radius, double abs_tol) {
  using C = std::complex<double>;
  std::array<double, 3> x{};
  QuadResult<C> total;
  total.converged = true;
  // Level k integrates over coordinate k given the squared radius left over by
  // the outer coordinates. Inner tolerances are tightened so that the outer
  // rule sees a smooth integrand.
  auto level = [&](auto&& self, int k, double r2, double tol) -> C {
    const double half = std::sqrt(std::max(r2, 0.0));
    auto inner = [&](double t) -> C {
      x[k] = center[k] + t;
      if (k + 1 == dim) return f(std::span<const double>(x.data(), dim));
      return self(self, k + 1, r2 - t * t, tol * 1e-2);
    };
    auto res = integrate<C>(inner, -half, half, tol, 0.0, 2000);
    total.evaluations += res.evaluations;
    total.converged = total.converged && res.converged;
    if (k == 0) total.error = res.error;
    return res.value;
  };
  total.value = level(level, 0, radius * radius, abs_tol);
  return total;
}

}  // namespace cryst
