#include <doctest.h>

#include <cmath>

#include "cryst/errors.hpp"
#include "cryst/exact.hpp"

using namespace cryst;

TEST_CASE("parse and print") {
  CHECK(ExactReal::parse("3/10").rational_part() == mpq_class(3, 10));
  CHECK(ExactReal::parse("0.25") == ExactReal(mpq_class(1, 4)));
  CHECK(ExactReal::parse("sqrt(8)") == ExactReal::sqrt_of(8));
  CHECK(ExactReal::parse("sqrt(8)").terms().at(2) == 2);
  CHECK(ExactReal::parse("sqrt(8/9)").to_double() == doctest::Approx(std::sqrt(8.0 / 9.0)));
  auto x = ExactReal::parse("1 + sqrt(2) - 1/2*sqrt(3)");
  CHECK(x.to_double() == doctest::Approx(1 + std::sqrt(2.0) - 0.5 * std::sqrt(3.0)));
  CHECK(ExactReal::parse(x.str()) == x);
  CHECK(ExactReal::parse("sqrt(4)").is_integer());
  CHECK_THROWS_AS(ExactReal::parse("sqrt(-1)"), ConfigError);
  CHECK_THROWS_AS(ExactReal::parse("2 +"), ConfigError);
  CHECK_THROWS_AS(ExactReal::parse("1/0"), ConfigError);
}

TEST_CASE("arithmetic") {
  auto s2 = ExactReal::sqrt_of(2), s3 = ExactReal::sqrt_of(3);
  CHECK((s2 * s2) == ExactReal(2));
  CHECK((s2 * s3) == ExactReal::sqrt_of(6));
  CHECK((s2 - s2).is_zero());
  CHECK((s2 * mpq_class(0)).is_zero());
  CHECK(ExactReal::parse("7/3 + sqrt(5)").mod1() == ExactReal::parse("1/3 + sqrt(5)"));
  CHECK(ExactReal::parse("-1/4").mod1() == ExactReal::parse("3/4"));
  CHECK(ExactReal::from_double(0.375) == ExactReal(mpq_class(3, 8)));
  CHECK_FALSE(s2.is_rational());
}

TEST_CASE("integer kernel") {
  // x = (1, 2): relations spanned by (2, -1)
  auto k = integer_kernel({{1, 2}}, 2);
  REQUIRE(k.size() == 1);
  CHECK(((k[0][0] == 2 && k[0][1] == -1) || (k[0][0] == -2 && k[0][1] == 1)));

  CHECK(integer_kernel({{1, 0}, {0, 1}}, 2).empty());

  // every kernel vector must satisfy A m = 0 and the rank must be n - rank(A)
  IntMatrix a{{3, 5, 7, 11}, {2, -4, 6, 0}};
  auto basis = integer_kernel(a, 4);
  CHECK(basis.size() == 2);
  for (const auto& v : basis)
    for (const auto& row : a) {
      mpz_class s = 0;
      for (std::size_t j = 0; j < 4; ++j) s += row[j] * v[j];
      CHECK(s == 0);
    }
}

TEST_CASE("exact rank and multinomials") {
  CHECK(exact_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(exact_rank({{1, 2}, {2, 5}}) == 2);
  CHECK(multinomial({1, 1}) == 2);
  CHECK(multinomial({2, 1, 1}) == 12);
  for (unsigned n = 1; n <= 4; ++n) {
    mpz_class p = 1;
    for (unsigned q = 0; q <= 6; ++q) {
      CHECK(multinomial_sum(n, q) == p);
      p *= n + 1;
    }
  }
}
