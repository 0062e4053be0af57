#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cryst/errors.hpp"
#include "cryst/quadrature.hpp"

using namespace cryst;
using std::numbers::pi;

TEST_CASE("polynomials and smooth integrands") {
  auto r = integrate<double>([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0, 1e-14);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-14));
  auto g = integrate<double>([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-13);
  CHECK(g.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  auto osc = integrate<std::complex<double>>(
      [](double x) { return std::polar(1.0, 40.0 * x); }, 0.0, 1.0, 1e-13);
  const std::complex<double> exact = (std::polar(1.0, 40.0) - 1.0) / std::complex<double>(0.0, 40.0);
  CHECK(std::abs(osc.value - exact) < 1e-12);
}

TEST_CASE("endpoint singularity still converges") {
  auto r = integrate<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("failure is reported") {
  CHECK_THROWS_AS(integrate_or_throw([](double x) { return std::sin(1.0 / x); }, 0.0, 1.0, 1e-15,
                                     0.0, 20),
                  NumericalError);
}

TEST_CASE("ball integrals") {
  const double c3[] = {0.5, -1.0, 2.0};
  for (int d = 1; d <= 3; ++d) {
    auto vol = integrate_ball([](std::span<const double>) { return std::complex<double>(1.0); }, d,
                              std::span(c3, d), 1.5, 1e-10);
    const double exact[] = {3.0, pi * 2.25, 4.0 / 3.0 * pi * 3.375};
    CHECK(vol.value.real() == doctest::Approx(exact[d - 1]).epsilon(1e-9));
  }
  const double c2[] = {0.0, 0.0};
  auto r2 = integrate_ball(
      [](std::span<const double> t) { return std::complex<double>(t[0] * t[0] + t[1] * t[1]); }, 2,
      c2, 1.0, 1e-11);
  CHECK(r2.value.real() == doctest::Approx(pi / 2.0).epsilon(1e-9));
}
