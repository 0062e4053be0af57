#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cryst/exact.hpp"
#include "cryst/measure.hpp"
#include "cryst/point.hpp"

namespace cryst {

/// Find t with |<x_j, t> - theta_j - p_j| < eps for integers p_j.
struct KroneckerInstance {
  int dim = 1;
  std::vector<Point> vectors;
  std::vector<double> targets;
  double eps = 1e-2;
  /// Exact coordinates (N rows of dim entries) and targets, when known.
  std::optional<std::vector<std::vector<ExactReal>>> exact_vectors;
  std::optional<std::vector<ExactReal>> exact_targets;

  std::size_t size() const { return vectors.size(); }
  void validate() const;

  /// Builds an instance from exact strings; the floating fields are derived.
  static KroneckerInstance from_exact(int dim, const std::vector<std::vector<std::string>>& vectors,
                                      const std::vector<std::string>& targets, double eps);
};

struct KroneckerSolution {
  Point t;
  std::vector<long long> p;
  std::vector<double> residuals;
  bool success = false;
  std::string backend;
  /// |f(t)| for f(t) = 1 + sum_j e^{2 pi i (<x_j, t> - theta_j)}.
  double value = 0.0;
  /// Largest |f| seen anywhere during the search.
  double best_value = 0.0;
  std::size_t candidates = 0;
  int starts = 0;

  double max_residual() const;
};

struct SolveOptions {
  std::uint64_t seed = 1;
  int starts = 64;
  double start_box = 10.0;
  /// Anchored lattice candidates examined before giving up.
  std::size_t budget = 1'000'000;
};

KroneckerSolution solve(const KroneckerInstance& inst, const SolveOptions& opts = {});

/// |f(t)| for the instance's f.
double kronecker_value(const KroneckerInstance& inst, const Point& t);

/// Residuals |<x_j, t> - theta_j - p_j| with p_j the nearest integers.
std::vector<double> kronecker_residuals(const KroneckerInstance& inst, const Point& t,
                                        std::vector<long long>* p = nullptr);

struct RelationCheck {
  std::vector<IntVector> relations;
  std::vector<IntVector> violations;
  bool solvable = true;
  /// "exact" or "heuristic".
  std::string mode;
  /// Targets compared with a tolerance rather than exactly.
  bool numeric = false;
  /// Coefficient height bound of the heuristic search (0 in exact mode).
  long height = 0;
  /// False when the heuristic search could have missed relations.
  bool complete = true;
};

RelationCheck relation_check(const KroneckerInstance& inst);

struct ExpansionEntry {
  std::vector<unsigned> m;
  Point beta;
  mpz_class c;
  double phase = 0.0;
  Complex alpha;
};

struct MergedTerm {
  Point beta;
  Complex alpha;
  /// |alpha| is an integer known exactly.
  bool exact = false;
  mpz_class abs_exact;
  double abs = 0.0;
};

struct PowerExpansion {
  unsigned q = 0;
  unsigned n = 0;
  std::vector<ExpansionEntry> entries;
  std::vector<MergedTerm> merged;
  mpz_class multinomial_total;
};

/// f(t)^q = sum_s alpha_s e^{2 pi i <beta_s, t>}, terms at equal beta merged
/// with exact frequencies and phases.
PowerExpansion power_expansion(const KroneckerInstance& inst, unsigned q);

struct CertificateResult {
  bool exact = false;
  mpz_class sum_exact;
  double sum_abs = 0.0;
  mpz_class target;
  bool equals_target = false;
  bool strict_deficit = false;
  bool passes = false;

  std::string sum_str() const;
};

CertificateResult certificate_check(const PowerExpansion& exp, bool independent);

/// Lower bound on sup_t |f(t)| from the search.
double sup_estimate(const KroneckerInstance& inst, const SolveOptions& opts = {});

}  // namespace cryst
