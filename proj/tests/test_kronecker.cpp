#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cryst/errors.hpp"
#include "cryst/kronecker.hpp"

using namespace cryst;
using std::numbers::pi;

namespace {

// independent residual recomputation in long double
double recomputed_residual(const KroneckerInstance& inst, const Point& t) {
  double worst = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    long double v = 0.0L;
    for (int i = 0; i < inst.dim; ++i) v += (long double)inst.vectors[j][i] * t[i];
    v -= inst.targets[j];
    worst = std::max(worst, (double)std::fabs(v - std::roundl(v)));
  }
  return worst;
}

KroneckerInstance dependent_cancellation() {
  return KroneckerInstance::from_exact(1, {{"1"}, {"1"}}, {"0", "1/2"}, 1e-2);
}

}  // namespace

TEST_CASE("exact backend") {
  auto one = KroneckerInstance::from_exact(1, {{"1"}}, {"1/4"}, 1e-2);
  auto s = solve(one);
  CHECK(s.success);
  CHECK(s.backend == "exact");
  CHECK(s.t[0] == doctest::Approx(0.25));
  CHECK(s.p[0] == 0);
  CHECK(s.max_residual() <= 1e-12);

  auto two = KroneckerInstance::from_exact(2, {{"1", "0"}, {"0", "1"}}, {"3/10", "7/10"}, 1e-2);
  auto s2 = solve(two);
  CHECK(s2.success);
  CHECK(s2.t[0] == doctest::Approx(0.3));
  CHECK(s2.t[1] == doctest::Approx(0.7));
  CHECK(s2.max_residual() <= 1e-12);
}

TEST_CASE("search backend with independent frequencies") {
  auto inst = KroneckerInstance::from_exact(1, {{"1"}, {"sqrt(2)"}}, {"1/2", "1/2"}, 1e-2);
  auto s = solve(inst);
  REQUIRE(s.success);
  CHECK(recomputed_residual(inst, s.t) < 1e-2);
  auto r = kronecker_residuals(inst, s.t);
  for (std::size_t j = 0; j < r.size(); ++j) CHECK(std::abs(r[j] - s.residuals[j]) < 1e-12);
  CHECK(s.value >= 3.0 * (1 - 2 * pi * pi * 1e-4));
}

TEST_CASE("search backend on an unsolvable instance fails") {
  KroneckerInstance inst;
  inst.dim = 1;
  inst.vectors = {Point{1.0}, Point{2.0}};
  inst.targets = {0.25, 0.3};
  inst.eps = 1e-2;
  SolveOptions opts;
  opts.budget = 20000;
  auto s = solve(inst, opts);
  CHECK_FALSE(s.success);
}

TEST_CASE("relation check") {
  auto solvable = KroneckerInstance::from_exact(1, {{"1"}, {"2"}}, {"1/4", "1/2"}, 1e-2);
  auto rc = relation_check(solvable);
  CHECK(rc.mode == "exact");
  REQUIRE(rc.relations.size() == 1);
  CHECK(std::abs(rc.relations[0][0].get_si()) == 2);
  CHECK(std::abs(rc.relations[0][1].get_si()) == 1);
  CHECK(rc.solvable);
  CHECK(solve(solvable).success);

  auto bad = KroneckerInstance::from_exact(1, {{"1"}, {"2"}}, {"1/4", "3/10"}, 1e-2);
  auto rb = relation_check(bad);
  CHECK_FALSE(rb.solvable);
  CHECK(rb.violations.size() == 1);

  auto indep = KroneckerInstance::from_exact(1, {{"1"}, {"sqrt(2)"}}, {"1/3", "1/5"}, 1e-2);
  auto ri = relation_check(indep);
  CHECK(ri.relations.empty());
  CHECK(ri.solvable);

  KroneckerInstance numeric;
  numeric.dim = 1;
  numeric.vectors = {Point{1.0}, Point{2.0}};
  numeric.targets = {0.25, 0.3};
  auto rn = relation_check(numeric);
  CHECK(rn.mode == "heuristic");
  CHECK_FALSE(rn.solvable);
}

TEST_CASE("power expansion") {
  auto one = KroneckerInstance::from_exact(1, {{"sqrt(2)"}}, {"1/3"}, 1e-2);
  auto e = power_expansion(one, 2);
  REQUIRE(e.entries.size() == 3);
  std::vector<long> cs;
  for (const auto& en : e.entries) cs.push_back(en.c.get_si());
  std::sort(cs.begin(), cs.end());
  CHECK(cs == std::vector<long>{1, 1, 2});
  auto c = certificate_check(e, true);
  CHECK(c.sum_exact == 4);
  CHECK(c.passes);

  auto two = KroneckerInstance::from_exact(1, {{"sqrt(2)"}, {"sqrt(3)"}}, {"0", "0"}, 1e-2);
  CHECK(certificate_check(power_expansion(two, 1), true).sum_exact == 3);

  auto three = KroneckerInstance::from_exact(1, {{"sqrt(2)"}, {"sqrt(3)"}, {"sqrt(5)"}},
                                             {"1/7", "2/7", "3/7"}, 1e-2);
  auto c3 = certificate_check(power_expansion(three, 4), true);
  CHECK(c3.sum_str() == "256");
  CHECK(c3.passes);

  auto q0 = certificate_check(power_expansion(three, 0), true);
  CHECK(q0.sum_exact == 1);
  CHECK(q0.equals_target);

  auto dep = dependent_cancellation();
  for (unsigned q = 1; q <= 6; ++q) {
    auto pe = power_expansion(dep, q);
    auto cd = certificate_check(pe, false);
    CHECK(cd.exact);
    CHECK(cd.sum_exact == 1);
    CHECK(cd.strict_deficit);
    CHECK(pe.entries.size() <= std::pow(q + 1, 2));
  }
}

TEST_CASE("power expansion reproduces f^q numerically") {
  auto inst = KroneckerInstance::from_exact(1, {{"sqrt(2)"}, {"1/3"}}, {"1/5", "1/2"}, 1e-2);
  for (unsigned q : {1u, 3u, 5u}) {
    auto pe = power_expansion(inst, q);
    for (double t : {0.0, 0.37, -2.1}) {
      Complex f = 1.0;
      for (std::size_t j = 0; j < 2; ++j)
        f += std::polar(1.0, 2 * pi * (inst.vectors[j][0] * t - inst.targets[j]));
      Complex sum = 0.0;
      for (const auto& m : pe.merged) sum += m.alpha * std::polar(1.0, 2 * pi * m.beta[0] * t);
      CHECK(std::abs(sum - std::pow(f, double(q))) < 1e-9 * std::pow(3.0, q));
    }
  }
}

TEST_CASE("sup estimates") {
  auto dep = dependent_cancellation();
  CHECK(sup_estimate(dep) == doctest::Approx(1.0));
  auto one = KroneckerInstance::from_exact(1, {{"1"}}, {"0"}, 1e-2);
  CHECK(sup_estimate(one) == doctest::Approx(2.0));
  auto two = KroneckerInstance::from_exact(1, {{"sqrt(2)"}, {"sqrt(3)"}}, {"0", "0"}, 1e-2);
  CHECK(sup_estimate(two) >= 2.99);
}

TEST_CASE("validation") {
  KroneckerInstance bad;
  bad.dim = 1;
  bad.vectors = {Point{1.0}};
  bad.targets = {};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.targets = {0.1};
  bad.eps = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
