#include "cryst/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "cryst/errors.hpp"

namespace cryst {

namespace {

// Largest s with s^2 | n, and the squarefree cofactor.
void split_square(mpz_class n, mpz_class& root, mpz_class& free) {
  root = 1;
  free = 1;
  if (n == 0) {
    root = 0;
    return;
  }
  for (unsigned long p = 2; p * p <= n && p < 100000; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      root *= p;
    }
    if (n % p == 0) {
      n /= p;
      free *= p;
    }
  }
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  if (s * s == n) {
    root *= s;
  } else {
    free *= n;
  }
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExactReal run() {
    ExactReal v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ConfigError("cannot parse exact number '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  ExactReal expr() {
    ExactReal v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }
  ExactReal term() {
    ExactReal v = factor();
    for (;;) {
      if (eat('*')) {
        v = v * factor();
      } else if (eat('/')) {
        ExactReal d = factor();
        if (!d.is_rational() || d.is_zero()) fail("division by a non-rational or zero");
        v *= 1 / d.rational_part();
      } else {
        return v;
      }
    }
  }
  ExactReal factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      ExactReal v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      ExactReal v = expr();
      if (!eat(')')) fail("missing ')'");
      if (!v.is_rational()) fail("nested radicals are not supported");
      if (v.rational_part() < 0) fail("sqrt of a negative number");
      return ExactReal::sqrt_of(v.rational_part());
    }
    return number();
  }
  ExactReal number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string whole = s_.substr(start, pos_ - start);
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      const std::size_t f0 = ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      frac = s_.substr(f0, pos_ - f0);
    }
    if (whole.empty() && frac.empty()) fail("expected a number");
    long exp10 = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
      const std::size_t e0 = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (e0 == pos_ || pos_ - e0 > 6) fail("bad exponent");
      exp10 = std::stol(s_.substr(e0, pos_ - e0));
      if (neg) exp10 = -exp10;
    }
    mpz_class num((whole.empty() ? "0" : whole) + frac, 10);
    exp10 -= static_cast<long>(frac.size());
    mpz_class ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    mpq_class q = exp10 >= 0 ? mpq_class(num * ten) : mpq_class(num, ten);
    q.canonicalize();
    return ExactReal(q);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

void ExactReal::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second.canonicalize();
    if (it->second == 0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

ExactReal ExactReal::parse(const std::string& s) { return Parser(s).run(); }

ExactReal ExactReal::from_double(double v) {
  if (!std::isfinite(v)) throw ConfigError("non-finite value has no exact form");
  return ExactReal(mpq_class(v));
}

ExactReal ExactReal::sqrt_of(const mpq_class& r) {
  if (r < 0) throw ConfigError("sqrt of a negative number");
  // sqrt(p/q) = sqrt(p q) / q
  const mpz_class pq = r.get_num() * r.get_den();
  mpz_class root, free;
  split_square(pq, root, free);
  ExactReal out;
  if (root == 0) return out;
  if (!free.fits_ulong_p()) throw ConfigError("radicand too large");
  out.terms_[free.get_ui()] = mpq_class(root, r.get_den());
  out.normalize();
  return out;
}

bool ExactReal::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

mpq_class ExactReal::rational_part() const {
  auto it = terms_.find(1);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

bool ExactReal::is_integer() const { return is_rational() && rational_part().get_den() == 1; }

double ExactReal::to_double() const {
  double s = 0.0;
  for (const auto& [k, q] : terms_) s += q.get_d() * std::sqrt(static_cast<double>(k));
  return s;
}

std::string ExactReal::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, q] : terms_) {
    mpq_class c = q;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      c = abs(c);
    }
    first = false;
    if (k == 1) {
      os << c.get_str();
    } else if (c == 1) {
      os << "sqrt(" << k << ")";
    } else if (c == -1) {
      os << "-sqrt(" << k << ")";
    } else {
      os << c.get_str() << "*sqrt(" << k << ")";
    }
  }
  return os.str();
}

ExactReal ExactReal::mod1() const {
  ExactReal out = *this;
  mpq_class r = rational_part();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  out.terms_[1] = r - fl;
  out.normalize();
  return out;
}

ExactReal& ExactReal::operator+=(const ExactReal& o) {
  for (const auto& [k, q] : o.terms_) terms_[k] += q;
  normalize();
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& o) {
  for (const auto& [k, q] : o.terms_) terms_[k] -= q;
  normalize();
  return *this;
}

ExactReal& ExactReal::operator*=(const mpq_class& s) {
  for (auto& [k, q] : terms_) q *= s;
  normalize();
  return *this;
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
  ExactReal out;
  for (const auto& [ka, qa] : a.terms_) {
    for (const auto& [kb, qb] : b.terms_) {
      // squarefree ka, kb: ka kb = g^2 (ka/g)(kb/g)
      const unsigned long g = std::gcd(ka, kb);
      const mpz_class k = mpz_class(ka / g) * (kb / g);
      if (!k.fits_ulong_p()) throw ConfigError("radicand too large");
      out.terms_[k.get_ui()] += qa * qb * g;
    }
  }
  out.normalize();
  return out;
}

ExactReal ExactReal::operator-() const {
  ExactReal out = *this;
  for (auto& [k, q] : out.terms_) q = -q;
  return out;
}

bool operator==(const ExactReal& a, const ExactReal& b) { return a.terms_ == b.terms_; }

bool operator<(const ExactReal& a, const ExactReal& b) { return a.terms_ < b.terms_; }

namespace {

mpz_class dot(const IntVector& a, const IntVector& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// round(a / b) for b > 0
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_class twice = 2 * a + b;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * b).get_mpz_t());
  return q;
}

}  // namespace

std::vector<IntVector> integer_kernel(const IntMatrix& a, std::size_t n) {
  for (const IntVector& row : a) {
    if (row.size() != n) throw ConfigError("ragged integer matrix");
  }
  IntMatrix m = a;
  IntMatrix u(n, IntVector(n, 0));  // columns of u track the column operations
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  auto col_axpy = [&](std::size_t dst, std::size_t src, const mpz_class& f) {
    for (auto& row : m) row[dst] -= f * row[src];
    for (auto& row : u) row[dst] -= f * row[src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : m) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };
  std::size_t k = 0;
  for (std::size_t i = 0; i < m.size() && k < n; ++i) {
    for (;;) {
      std::size_t piv = n;
      for (std::size_t j = k; j < n; ++j) {
        if (m[i][j] != 0 && (piv == n || abs(m[i][j]) < abs(m[i][piv]))) piv = j;
      }
      if (piv == n) break;
      bool others = false;
      for (std::size_t j = k; j < n; ++j) {
        if (j == piv || m[i][j] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][j].get_mpz_t(), m[i][piv].get_mpz_t());
        col_axpy(j, piv, q);
        if (m[i][j] != 0) others = true;
      }
      if (!others) {
        col_swap(k, piv);
        ++k;
        break;
      }
    }
  }
  std::vector<IntVector> basis;
  for (std::size_t j = k; j < n; ++j) {
    IntVector v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = u[r][j];
    basis.push_back(std::move(v));
  }
  // pairwise size reduction until no vector shrinks
  bool changed = true;
  for (int pass = 0; changed && pass < 1000; ++pass) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        const mpz_class bb = dot(basis[j], basis[j]);
        const mpz_class f = round_div(dot(basis[i], basis[j]), bb);
        if (f == 0) continue;
        IntVector cand = basis[i];
        for (std::size_t r = 0; r < n; ++r) cand[r] -= f * basis[j][r];
        if (dot(cand, cand) < dot(basis[i], basis[i])) {
          basis[i] = std::move(cand);
          changed = true;
        }
      }
    }
  }
  for (IntVector& v : basis) {
    auto nz = std::find_if(v.begin(), v.end(), [](const mpz_class& x) { return x != 0; });
    if (nz != v.end() && *nz < 0) {
      for (mpz_class& x : v) x = -x;
    }
  }
  std::sort(basis.begin(), basis.end(), [](const IntVector& x, const IntVector& y) {
    const mpz_class nx = dot(x, x), ny = dot(y, y);
    if (nx != ny) return nx < ny;
    return x > y;
  });
  return basis;
}

std::size_t exact_rank(std::vector<std::vector<mpq_class>> rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const mpq_class f = rows[r][c] / rows[rank][c];
      for (std::size_t j = c; j < n; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

mpz_class multinomial(const std::vector<unsigned>& parts) {
  unsigned long total = 0;
  for (unsigned p : parts) total += p;
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), total);
  for (unsigned p : parts) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), p);
    out /= f;
  }
  return out;
}

mpz_class multinomial_sum(unsigned n, unsigned q) {
  mpz_class sum = 0;
  std::vector<unsigned> m(n + 1, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned j, unsigned left) {
    if (j == n + 1) {
      m[0] = left;
      sum += multinomial(m);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      m[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(1, q);
  return sum;
}

}  // namespace cryst
