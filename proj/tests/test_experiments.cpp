#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cryst/errors.hpp"
#include "cryst/experiments.hpp"

using namespace cryst;
using std::numbers::pi;

namespace {

LatticeCombSpec comb1(double window, double alpha, Complex beta = {1.0, 0.0}) {
  LatticeCombSpec s;
  s.dim = 1;
  s.window = window;
  s.terms.push_back({Lattice::scaled_integer(1), Point{0.0}, {{beta, Point{alpha}}}});
  return s;
}

Theorem2Options quick(std::size_t centers) {
  Theorem2Options o;
  o.n_centers = centers;
  return o;
}

}  // namespace

TEST_CASE("poisson check on the corpus") {
  for (const auto& entry : builtin_corpus()) {
    auto rep = poisson_check(entry.spec, default_poisson_functions(entry.spec.dim), entry.id);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-8);
    CHECK(rep.rows.size() == 3);
  }
  // unit comb, unit Gaussian: both sides equal sum exp(-pi n^2)
  double oracle = 0.0;
  for (int n = -6; n <= 6; ++n) oracle += std::exp(-pi * n * n);
  auto rep = poisson_check(comb1(30.0, 0.0), {TestFunction::gaussian(1, 1.0)});
  CHECK(std::abs(rep.rows[0].lhs - oracle) < 1e-12);
  CHECK(std::abs(rep.rows[0].rhs - oracle) < 1e-12);
  CHECK(rep.rows[0].residual < 1e-10);

  LatticeCombSpec empty;
  empty.dim = 1;
  empty.window = 10.0;
  auto e = poisson_check(empty, default_poisson_functions(1));
  CHECK(e.pass);
  CHECK(e.rows[0].lhs == Complex{0.0, 0.0});
}

TEST_CASE("poisson check on the modulated comb against a direct sum") {
  // lhs: sum over 0.3 + Z of e^{-pi a g^2}; rhs: sum over Z of e^{2 pi i 0.3 n} a^{-1/2} e^{-pi n^2 / a}
  const double a = 0.5;
  double lhs = 0.0;
  Complex rhs = 0.0;
  for (int n = -40; n <= 40; ++n) {
    lhs += std::exp(-pi * a * (n + 0.3) * (n + 0.3));
    rhs += std::polar(1.0, 2 * pi * 0.3 * n) * std::exp(-pi * n * n / a) / std::sqrt(a);
  }
  CHECK(std::abs(lhs - rhs) < 1e-12);
  auto rep = poisson_check(comb1(60.0, 0.3), {TestFunction::gaussian(1, a)});
  CHECK(std::abs(rep.rows[0].lhs - lhs) < 1e-12);
}

TEST_CASE("square-mass harness on the unit comb") {
  auto rep = theorem2_harness(comb1(120.0, 0.0), quick(50), "unit");
  CHECK(rep.pass);
  CHECK(rep.C >= 3.0 - 1e-9);
  CHECK(rep.nu_bound.sup_estimate == doctest::Approx(2.0));
  CHECK(rep.max_rel_diff < 0.05);
  CHECK(rep.centers.size() == 50);
  // oracle for y0 = 0: phi = 1 on [-1, 1] so the squares sum to 3 plus the glue region
  double direct0 = 0.0;
  auto phi = TestFunction::plateau(1, 1.0, 2.0);
  for (int n = -2; n <= 2; ++n) direct0 += std::norm(evaluate(phi, Point{double(n)}));
  Theorem2Options o;
  o.centers = {Point{0.0}};
  auto r0 = theorem2_harness(comb1(120.0, 0.0), o);
  CHECK(r0.centers[0].direct == doctest::Approx(direct0));
  CHECK(r0.centers[0].parseval_limit == doctest::Approx(direct0).epsilon(0.05));
}

TEST_CASE("square-mass harness is homogeneous of degree two") {
  Theorem2Options o;
  o.centers = {Point{0.0}, Point{0.4}, Point{-7.3}};
  auto r1 = theorem2_harness(comb1(120.0, 0.3), o);
  auto r2 = theorem2_harness(comb1(120.0, 0.3, {2.0, 0.0}), o);
  CHECK(r1.pass);
  CHECK(r2.pass);
  CHECK(r1.nu_bound.sup_estimate == doctest::Approx(2.0));
  CHECK(r2.nu_bound.sup_estimate == doctest::Approx(8.0));
  CHECK(r2.C == doctest::Approx(4.0 * r1.C).epsilon(1e-6));
}

TEST_CASE("square-mass harness on two incommensurable combs") {
  LatticeCombSpec s = comb1(120.0, 0.0);
  s.terms.push_back({Lattice::scaled_integer(1, std::sqrt(2.0)), Point{0.0}, {{1.0, Point{0.0}}}});
  auto r = theorem2_harness(s, quick(20));
  CHECK(r.gate.pass);
  CHECK(r.pass);
}

TEST_CASE("alignment of a packed spectrum") {
  auto inst = KroneckerInstance::from_exact(1, {{"sqrt(2)"}, {"sqrt(3)"}, {"sqrt(5)"}},
                                            {"0", "0", "0"}, 0.15);
  auto trial = align_phases(inst, {1.0, 1.0, 1.0});
  CHECK(trial.pass);
  CHECK(trial.re_sum >= 1.5);
  // recompute the real part directly
  double re = 0.0;
  for (const auto& v : inst.vectors) re += std::cos(2 * pi * v[0] * trial.solution.t[0]);
  CHECK(re == doctest::Approx(trial.re_sum).epsilon(1e-9));

  auto single = KroneckerInstance::from_exact(1, {{"7/10"}}, {"0"}, 0.15);
  auto ts = align_phases(single, {Complex{0.0, -2.0}});
  CHECK(ts.pass);
  CHECK(ts.re_sum >= 1.0);
}

TEST_CASE("phase alignment trials") {
  auto trials = phase_alignment_trials(10, 7);
  REQUIRE(trials.size() == 10);
  for (const auto& t : trials) {
    CHECK(t.pass);
    CHECK(t.re_sum >= 0.5 * t.mass);
    CHECK(t.frequencies.size() <= 5);
  }
}

TEST_CASE("ball harness") {
  auto rep = theorem3_harness(comb1(120.0, 0.3), 0.4);
  CHECK(rep.pass);
  CHECK(rep.dependent == 0);
  for (const auto& b : rep.balls) {
    CHECK(b.status == "singleton");
    CHECK(b.gammas.size() == 1);
    CHECK(b.core_mass == doctest::Approx(1.0));
  }
  CHECK(rep.max_core_mass == doctest::Approx(1.0));
  CHECK(rep.ceiling >= 1.0);
}

TEST_CASE("corpus contents") {
  auto c = builtin_corpus();
  REQUIRE(c.size() == 5);
  CHECK(c[3].nonnegative == false);
  CHECK(c[4].spec.dim == 2);
}
