#include "cryst/kronecker.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cryst/errors.hpp"

namespace cryst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRankThreshold = 1e-10;

double frac_dist(double v) { return std::abs(v - std::nearbyint(v)); }

Complex cis(double turns) { return std::polar(1.0, 2.0 * kPi * (turns - std::floor(turns))); }

Eigen::MatrixXd vector_matrix(const KroneckerInstance& inst, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), inst.dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < inst.dim; ++c) x(static_cast<Eigen::Index>(r), c) = inst.vectors[rows[r]][c];
  }
  return x;
}

std::size_t numeric_rank(const Eigen::MatrixXd& x) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(x);
  lu.setThreshold(kRankThreshold);
  return static_cast<std::size_t>(lu.rank());
}

// |f|^2 and its gradient
double objective(const KroneckerInstance& inst, const Eigen::VectorXd& t, Eigen::VectorXd* grad) {
  const std::size_t n = inst.size();
  std::vector<Complex> z(n);
  Complex f{1.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    double s = -inst.targets[j];
    for (int c = 0; c < inst.dim; ++c) s += inst.vectors[j][c] * t(c);
    z[j] = cis(s);
    f += z[j];
  }
  if (grad) {
    grad->setZero(inst.dim);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = -4.0 * kPi * std::imag(std::conj(f) * z[j]);
      for (int c = 0; c < inst.dim; ++c) (*grad)(c) += w * inst.vectors[j][c];
    }
  }
  return std::norm(f);
}

// BFGS ascent on |f|^2
Eigen::VectorXd ascend(const KroneckerInstance& inst, Eigen::VectorXd x, int max_iter = 200) {
  const int d = inst.dim;
  double scale = 0.0;
  for (const Point& v : inst.vectors) scale += v.norm2();
  const double h0 = 1.0 / (8.0 * kPi * kPi * static_cast<double>(inst.size() + 1) * std::max(scale, 1e-12));
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d) * h0;
  Eigen::VectorXd g(d);
  double fx = objective(inst, x, &g);
  for (int it = 0; it < max_iter && g.norm() >= 1e-12; ++it) {
    Eigen::VectorXd step = h * g;
    if (step.dot(g) <= 0.0) {
      h = Eigen::MatrixXd::Identity(d, d) * h0;
      step = h * g;
    }
    double a = 1.0;
    Eigen::VectorXd xn, gn(d);
    double fn = fx;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = x + a * step;
      fn = objective(inst, xn, &gn);
      if (fn >= fx + 1e-4 * a * step.dot(g)) {
        ok = true;
        break;
      }
      a *= 0.5;
    }
    if (!ok) break;
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = g - gn;  // gradient of -|f|^2 changes by -(gn - g)
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
      const double rho = 1.0 / sy;
      h = (eye - rho * s * y.transpose()) * h * (eye - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    const bool tiny = s.norm() <= 1e-15 * std::max(1.0, x.norm());
    x = xn;
    g = gn;
    fx = fn;
    if (tiny) break;
  }
  return x;
}

Point to_point(const Eigen::VectorXd& v) {
  Point p(static_cast<int>(v.size()));
  for (int i = 0; i < v.size(); ++i) p[i] = v(i);
  return p;
}

void fill(const KroneckerInstance& inst, KroneckerSolution& sol, const Point& t) {
  sol.t = t;
  sol.residuals = kronecker_residuals(inst, t, &sol.p);
  sol.value = kronecker_value(inst, t);
  sol.best_value = std::max(sol.best_value, sol.value);
  sol.success = sol.max_residual() < inst.eps;
}

// Visits integer vectors of dimension r with sup norm exactly s: the first
// coordinate of modulus s sits at index i.
bool for_each_shell(std::size_t r, long s, const std::function<bool(const std::vector<long>&)>& fn) {
  std::vector<long> v(r, 0);
  if (s == 0) return fn(v);
  for (std::size_t i = 0; i < r; ++i) {
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
      if (k == r) return fn(v);
      if (k == i) {
        for (long sign : {-1L, 1L}) {
          v[k] = sign * s;
          if (!rec(k + 1)) return false;
        }
        return true;
      }
      const long lim = k < i ? s - 1 : s;
      for (long x = -lim; x <= lim; ++x) {
        v[k] = x;
        if (!rec(k + 1)) return false;
      }
      return true;
    };
    if (!rec(0)) return false;
  }
  return true;
}

}  // namespace

void KroneckerInstance::validate() const {
  require_dim(dim);
  if (vectors.empty()) throw ConfigError("instance needs at least one vector");
  if (targets.size() != vectors.size()) throw ConfigError("need one target per vector");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
  for (const Point& v : vectors) {
    if (v.dim() != dim) throw ConfigError("vector dimension mismatch");
    if (!v.finite()) throw ConfigError("non-finite vector");
    if (v.norm() == 0.0) throw ConfigError("vectors must be nonzero");
  }
  for (double t : targets) {
    if (!std::isfinite(t)) throw ConfigError("non-finite target");
  }
  if (exact_vectors && exact_vectors->size() != vectors.size()) {
    throw ConfigError("exact vectors do not match the instance");
  }
  if (exact_targets && exact_targets->size() != targets.size()) {
    throw ConfigError("exact targets do not match the instance");
  }
}

KroneckerInstance KroneckerInstance::from_exact(int dim,
                                                const std::vector<std::vector<std::string>>& vectors,
                                                const std::vector<std::string>& targets,
                                                double eps) {
  KroneckerInstance inst;
  inst.dim = dim;
  inst.eps = eps;
  std::vector<std::vector<ExactReal>> ev;
  std::vector<ExactReal> et;
  for (const auto& row : vectors) {
    if (static_cast<int>(row.size()) != dim) throw ConfigError("vector dimension mismatch");
    std::vector<ExactReal> er;
    Point p(dim);
    for (int c = 0; c < dim; ++c) {
      er.push_back(ExactReal::parse(row[static_cast<std::size_t>(c)]));
      p[c] = er.back().to_double();
    }
    inst.vectors.push_back(p);
    ev.push_back(std::move(er));
  }
  for (const std::string& s : targets) {
    et.push_back(ExactReal::parse(s));
    inst.targets.push_back(et.back().to_double());
  }
  inst.exact_vectors = std::move(ev);
  inst.exact_targets = std::move(et);
  inst.validate();
  return inst;
}

double KroneckerSolution::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

double kronecker_value(const KroneckerInstance& inst, const Point& t) {
  Complex f{1.0, 0.0};
  for (std::size_t j = 0; j < inst.size(); ++j) f += cis(dot(inst.vectors[j], t) - inst.targets[j]);
  return std::abs(f);
}

std::vector<double> kronecker_residuals(const KroneckerInstance& inst, const Point& t,
                                        std::vector<long long>* p) {
  std::vector<double> out;
  if (p) p->clear();
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const double s = dot(inst.vectors[j], t) - inst.targets[j];
    const double k = std::nearbyint(s);
    out.push_back(std::abs(s - k));
    if (p) p->push_back(static_cast<long long>(k));
  }
  return out;
}

KroneckerSolution solve(const KroneckerInstance& inst, const SolveOptions& opts) {
  inst.validate();
  const std::size_t n = inst.size();
  const int d = inst.dim;
  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;
  const Eigen::MatrixXd x = vector_matrix(inst, all);
  KroneckerSolution sol;

  if (static_cast<int>(n) <= d && numeric_rank(x) == n) {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) theta(static_cast<Eigen::Index>(j)) = inst.targets[j];
    const Eigen::VectorXd t = x.completeOrthogonalDecomposition().solve(theta);
    sol.backend = "exact";
    fill(inst, sol, to_point(t));
    return sol;
  }

  if (n > 8 || inst.eps < 1e-4) {
    throw ConfigError("search backend needs N <= 8 and eps >= 1e-4");
  }
  sol.backend = "search";
  KroneckerSolution best;
  bool have = false;
  auto consider = [&](const Point& t) {
    KroneckerSolution s;
    s.backend = "search";
    fill(inst, s, t);
    sol.best_value = std::max(sol.best_value, s.value);
    if (!have || s.max_residual() < best.max_residual() ||
        (s.max_residual() == best.max_residual() && (s.t <=> best.t) < 0)) {
      best = s;
      have = true;
    }
    return s.success;
  };
  auto finish = [&]() {
    const double bv = sol.best_value;
    const std::size_t cand = sol.candidates;
    const int starts = sol.starts;
    sol = best;
    sol.backend = "search";
    sol.best_value = std::max(bv, sol.value);
    sol.candidates = cand;
    sol.starts = starts;
    return sol;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-opts.start_box, opts.start_box);
  for (int s = 0; s < opts.starts; ++s) {
    Eigen::VectorXd t0(d);
    for (int c = 0; c < d; ++c) t0(c) = unif(rng);
    ++sol.starts;
    if (consider(to_point(ascend(inst, t0)))) return finish();
  }

  // anchored enumeration: pin an independent subset S exactly, scan its
  // integer shifts in growing shells, polish promising points
  std::vector<std::size_t> subset;
  for (std::size_t j = 0; j < n && static_cast<int>(subset.size()) < d; ++j) {
    std::vector<std::size_t> trial = subset;
    trial.push_back(j);
    if (numeric_rank(vector_matrix(inst, trial)) == trial.size()) subset = trial;
  }
  const Eigen::MatrixXd xs = vector_matrix(inst, subset);
  const Eigen::MatrixXd pinv = xs.completeOrthogonalDecomposition().pseudoInverse();
  const std::size_t r = subset.size();
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(r));
  bool done = false;
  for (long shell = 0; !done && sol.candidates < opts.budget; ++shell) {
    for_each_shell(r, shell, [&](const std::vector<long>& p) {
      if (sol.candidates >= opts.budget) return false;
      ++sol.candidates;
      for (std::size_t i = 0; i < r; ++i) {
        rhs(static_cast<Eigen::Index>(i)) = inst.targets[subset[i]] + static_cast<double>(p[i]);
      }
      const Eigen::VectorXd t0 = pinv * rhs;
      double worst = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double s = -inst.targets[j];
        for (int c = 0; c < d; ++c) s += inst.vectors[j][c] * t0(c);
        worst = std::max(worst, frac_dist(s));
        if (worst >= 2.0 * inst.eps) break;
      }
      if (worst >= 2.0 * inst.eps && have) return true;
      if (consider(to_point(t0)) || consider(to_point(ascend(inst, t0, 50)))) {
        done = true;
        return false;
      }
      return true;
    });
  }
  return finish();
}

RelationCheck relation_check(const KroneckerInstance& inst) {
  inst.validate();
  const std::size_t n = inst.size();
  RelationCheck out;
  auto theta_sum_ok = [&](const IntVector& m) {
    if (inst.exact_targets) {
      ExactReal s;
      for (std::size_t j = 0; j < n; ++j) s += (*inst.exact_targets)[j] * mpq_class(m[j]);
      return s.is_integer();
    }
    out.numeric = true;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m[j].get_d() * inst.targets[j];
    return frac_dist(s) <= 1e-9;
  };

  if (inst.exact_vectors) {
    out.mode = "exact";
    IntMatrix rows;
    for (int c = 0; c < inst.dim; ++c) {
      std::map<unsigned long, std::vector<mpq_class>> by_radicand;
      for (std::size_t j = 0; j < n; ++j) {
        for (const auto& [k, q] : (*inst.exact_vectors)[j][static_cast<std::size_t>(c)].terms()) {
          auto& row = by_radicand[k];
          row.resize(n, mpq_class(0));
          row[j] = q;
        }
      }
      for (auto& [k, row] : by_radicand) {
        mpz_class l = 1;
        for (const mpq_class& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        IntVector ir(n);
        for (std::size_t j = 0; j < n; ++j) {
          mpq_class v = row[j] * l;
          v.canonicalize();
          ir[j] = v.get_num();
        }
        rows.push_back(std::move(ir));
      }
    }
    out.relations = integer_kernel(rows, n);
    for (const IntVector& m : out.relations) {
      if (!theta_sum_ok(m)) out.violations.push_back(m);
    }
    out.solvable = out.violations.empty();
    return out;
  }

  out.mode = "heuristic";
  long h = 1;
  while (std::pow(2.0 * static_cast<double>(h + 1) + 1.0, static_cast<double>(n)) <= 2e6) ++h;
  out.height = h;
  out.complete = false;
  std::vector<IntVector> found;
  std::vector<long> m(n, 0);
  std::function<void(std::size_t, bool)> rec = [&](std::size_t j, bool nonzero) {
    if (j == n) {
      if (!nonzero) return;
      long g = 0;
      for (long v : m) g = std::gcd(g, std::labs(v));
      if (g != 1) return;
      Point s(inst.dim);
      for (std::size_t i = 0; i < n; ++i) s += inst.vectors[i] * static_cast<double>(m[i]);
      if (s.norm() < 1e-9 && found.size() < 10000) {
        IntVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = m[i];
        found.push_back(std::move(v));
      }
      return;
    }
    // first nonzero coordinate positive
    for (long v = nonzero ? -h : 0; v <= h; ++v) {
      m[j] = v;
      rec(j + 1, nonzero || v != 0);
    }
    m[j] = 0;
  };
  rec(0, false);
  auto norm2 = [](const IntVector& v) {
    mpz_class s = 0;
    for (const mpz_class& x : v) s += x * x;
    return s;
  };
  std::sort(found.begin(), found.end(), [&](const IntVector& a, const IntVector& b) {
    const mpz_class na = norm2(a), nb = norm2(b);
    if (na != nb) return na < nb;
    return a > b;
  });
  std::vector<std::vector<mpq_class>> span;
  for (const IntVector& v : found) {
    std::vector<mpq_class> row(v.begin(), v.end());
    span.push_back(row);
    if (exact_rank(span) == span.size()) {
      out.relations.push_back(v);
    } else {
      span.pop_back();
    }
  }
  for (const IntVector& v : found) {
    if (!theta_sum_ok(v)) {
      if (std::find(out.relations.begin(), out.relations.end(), v) == out.relations.end()) {
        out.relations.push_back(v);
      }
      out.violations.push_back(v);
    }
  }
  out.solvable = out.violations.empty();
  return out;
}

PowerExpansion power_expansion(const KroneckerInstance& inst, unsigned q) {
  inst.validate();
  const std::size_t n = inst.size();
  if (std::pow(static_cast<double>(q) + 1.0, static_cast<double>(n)) > 1e7) {
    throw ResourceError("power expansion exceeds (q+1)^N <= 1e7");
  }
  const int d = inst.dim;
  std::vector<std::vector<ExactReal>> ex(n, std::vector<ExactReal>(static_cast<std::size_t>(d)));
  std::vector<ExactReal> et(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (int c = 0; c < d; ++c) {
      ex[j][static_cast<std::size_t>(c)] =
          inst.exact_vectors ? (*inst.exact_vectors)[j][static_cast<std::size_t>(c)]
                             : ExactReal::from_double(inst.vectors[j][c]);
    }
    et[j] = inst.exact_targets ? (*inst.exact_targets)[j] : ExactReal::from_double(inst.targets[j]);
  }

  PowerExpansion out;
  out.q = q;
  out.n = static_cast<unsigned>(n);
  out.multinomial_total = 0;
  // beta (exact) -> phase mod 1 (exact) -> summed multinomials
  std::map<std::vector<ExactReal>, std::map<ExactReal, mpz_class>> groups;
  std::map<std::vector<ExactReal>, Point> beta_float;
  std::vector<unsigned> m(n + 1, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t j, unsigned left) {
    if (j == n + 1) {
      m[0] = left;
      ExpansionEntry e;
      e.m.assign(m.begin() + 1, m.end());
      e.c = multinomial(m);
      std::vector<ExactReal> beta(static_cast<std::size_t>(d));
      ExactReal phase;
      for (std::size_t i = 0; i < n; ++i) {
        const mpq_class mi(m[i + 1]);
        for (std::size_t c = 0; c < beta.size(); ++c) beta[c] += ex[i][c] * mi;
        phase += et[i] * mi;
      }
      e.beta = Point(d);
      for (int c = 0; c < d; ++c) e.beta[c] = beta[static_cast<std::size_t>(c)].to_double();
      const ExactReal ph = phase.mod1();
      e.phase = phase.to_double();
      e.alpha = e.c.get_d() * cis(-ph.to_double());
      out.multinomial_total += e.c;
      groups[beta][ph] += e.c;
      beta_float.emplace(beta, e.beta);
      out.entries.push_back(std::move(e));
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      m[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(1, q);

  for (const auto& [beta, phases] : groups) {
    MergedTerm t;
    t.beta = beta_float.at(beta);
    // also exact when every phase is a multiple of 1/4 and the sum lies on an axis
    bool quarter = true;
    mpz_class re = 0, im = 0;
    for (const auto& [ph, c] : phases) {
      t.alpha += c.get_d() * cis(-ph.to_double());
      if (!ph.is_rational()) {
        quarter = false;
        continue;
      }
      const mpq_class four = ph.rational_part() * 4;
      if (four.get_den() != 1) {
        quarter = false;
        continue;
      }
      switch (four.get_num().get_si()) {
        case 0: re += c; break;
        case 1: im -= c; break;
        case 2: re -= c; break;
        case 3: im += c; break;
        default: quarter = false;
      }
    }
    if (phases.size() == 1) {
      // one phase: |alpha| is the summed multinomial
      t.exact = true;
      t.abs_exact = phases.begin()->second;
      t.abs = t.abs_exact.get_d();
    } else if (quarter && (re == 0 || im == 0)) {
      t.exact = true;
      t.abs_exact = abs(re) + abs(im);
      t.abs = t.abs_exact.get_d();
      t.alpha = Complex(re.get_d(), im.get_d());
    } else {
      t.abs = std::abs(t.alpha);
    }
    if (t.exact && t.abs_exact == 0) continue;
    out.merged.push_back(std::move(t));
  }
  return out;
}

std::string CertificateResult::sum_str() const {
  if (exact) return sum_exact.get_str();
  std::ostringstream os;
  os.precision(17);
  os << sum_abs;
  return os.str();
}

CertificateResult certificate_check(const PowerExpansion& exp, bool independent) {
  CertificateResult out;
  mpz_ui_pow_ui(out.target.get_mpz_t(), exp.n + 1UL, exp.q);
  out.exact = true;
  out.sum_exact = 0;
  for (const MergedTerm& t : exp.merged) {
    out.sum_abs += t.abs;
    if (t.exact) {
      out.sum_exact += t.abs_exact;
    } else {
      out.exact = false;
    }
  }
  if (out.exact) {
    out.sum_abs = out.sum_exact.get_d();
    out.equals_target = out.sum_exact == out.target;
    out.strict_deficit = out.sum_exact < out.target;
  } else {
    out.equals_target = false;
    out.strict_deficit = out.sum_abs < out.target.get_d() * (1.0 - 1e-12);
  }
  out.passes = !independent || out.equals_target;
  return out;
}

double sup_estimate(const KroneckerInstance& inst, const SolveOptions& opts) {
  const KroneckerSolution s = solve(inst, opts);
  return std::max(s.value, s.best_value);
}

}  // namespace cryst
