#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace cryst {

/// Element of Q(sqrt 2, sqrt 3, ...): a finite sum q_k sqrt(k) over squarefree
/// radicands k >= 1 with rational q_k. Radicand 1 holds the rational part.
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(long v) : terms_{{1, mpq_class(v)}} { normalize(); }
  explicit ExactReal(const mpq_class& q) : terms_{{1, q}} { normalize(); }

  /// Parses e.g. "3/10", "0.25", "-1/2*sqrt(3)", "1 + sqrt(2)", "sqrt(8/9)".
  static ExactReal parse(const std::string& s);
  /// The exact dyadic rational equal to a finite double.
  static ExactReal from_double(double v);
  /// q sqrt(r) for a nonnegative rational r.
  static ExactReal sqrt_of(const mpq_class& r);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  /// Rational part (coefficient of sqrt(1)).
  mpq_class rational_part() const;
  bool is_integer() const;
  double to_double() const;
  std::string str() const;
  const std::map<unsigned long, mpq_class>& terms() const { return terms_; }

  /// Same value with the rational part reduced into [0, 1).
  ExactReal mod1() const;

  ExactReal& operator+=(const ExactReal& o);
  ExactReal& operator-=(const ExactReal& o);
  ExactReal& operator*=(const mpq_class& s);
  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const mpq_class& s) { return a *= s; }
  friend ExactReal operator*(const ExactReal& a, const ExactReal& b);
  ExactReal operator-() const;
  friend bool operator==(const ExactReal& a, const ExactReal& b);
  /// Arbitrary total order on representations (for use as a map key).
  friend bool operator<(const ExactReal& a, const ExactReal& b);

 private:
  void normalize();
  std::map<unsigned long, mpq_class> terms_;
};

using IntVector = std::vector<mpz_class>;
using IntMatrix = std::vector<IntVector>;  // row-major

/// Basis of {m in Z^n : A m = 0} for an integer matrix A with n columns,
/// via unimodular column reduction followed by pairwise size reduction.
std::vector<IntVector> integer_kernel(const IntMatrix& a, std::size_t n);

/// Rank of a rational matrix by exact elimination.
std::size_t exact_rank(std::vector<std::vector<mpq_class>> rows);

mpz_class multinomial(const std::vector<unsigned>& parts);

/// sum over (m_1..m_N), m_j >= 0, sum m_j <= q of the multinomial
/// q! / ((q - sum m)! m_1! ... m_N!); equals (N + 1)^q.
mpz_class multinomial_sum(unsigned n, unsigned q);

}  // namespace cryst
