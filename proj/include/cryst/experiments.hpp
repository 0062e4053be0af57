#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cryst/kronecker.hpp"
#include "cryst/lattice.hpp"
#include "cryst/measure.hpp"
#include "cryst/test_function.hpp"

namespace cryst {

struct PoissonRow {
  std::string function;
  Complex lhs;
  Complex rhs;
  /// |lhs - rhs| / max(1, |lhs|)
  double residual = 0.0;
  /// Bound on the mass of both sides lost outside the window.
  double tail_bound = 0.0;
  bool pass = false;
};

struct PoissonReport {
  std::string spec_id;
  std::vector<PoissonRow> rows;
  double window_used = 0.0;
  double max_residual = 0.0;
  double threshold = 1e-8;
  bool pass = true;
};

/// sum_gamma b_gamma phi(gamma) against sum_lambda a_lambda phi^(lambda) for
/// Gaussian phi; the window grows until both tails are below 1e-12.
PoissonReport poisson_check(const LatticeCombSpec& spec, const std::vector<TestFunction>& phis,
                            const std::string& spec_id = "", double threshold = 1e-8);

/// Gaussians with a in {1/2, 1, 2}.
std::vector<TestFunction> default_poisson_functions(int dim);

struct CenterCheck {
  Point y0;
  double nu_ball = 0.0;
  /// sum_gamma |phi(gamma - y0) b_gamma|^2
  double direct = 0.0;
  /// Large-R limit of the mean of |sum_gamma phi(gamma - y0) b_gamma e^{2 pi i <t, gamma>}|^2.
  double parseval_limit = 0.0;
  double rel_diff = 0.0;
  bool pass = false;
};

struct Theorem2Options {
  double r_in = 1.0;
  double r_out = 2.0;
  std::size_t n_centers = 1000;
  std::vector<Point> centers;
  std::vector<double> schedule{25.0, 50.0, 100.0, 200.0};
  std::uint64_t seed = 1;
  double agreement = 0.05;
  std::vector<double> growth_radii;
};

struct Theorem2Report {
  std::string spec_id;
  PoissonReport gate;
  BoundednessCheck boundedness;
  TranslationBoundReport nu_bound;
  double C = 0.0;
  std::vector<CenterCheck> centers;
  double max_rel_diff = 0.0;
  bool chain_ok = true;
  bool agreement_ok = true;
  std::vector<double> radii;
  std::vector<PartialMassBound> partial;
  GrowthReport count_fit;
  GrowthReport mass_fit;
  double tempered_limit = 0.0;
  bool tempered_ok = true;
  bool pass = false;
};

/// Runs the Poisson gate and the boundedness test first; throws CheckRefused
/// when either fails.
Theorem2Report theorem2_harness(const LatticeCombSpec& spec, const Theorem2Options& opts = {},
                                const std::string& spec_id = "");

struct BallReport {
  Point center;
  std::vector<Point> gammas;
  std::vector<Complex> masses;
  /// sum |b| over B(center, eta / 2)
  double core_mass = 0.0;
  /// "singleton", "independent" or "dependent"
  std::string status;
  Point x;
  std::vector<double> residuals;
  bool kronecker_success = false;
  /// Re sum_gamma phi(gamma - center) e^{2 pi i <x, gamma>} b_gamma
  double re_sum = 0.0;
  double abs_sum = 0.0;
  /// sum phi(gamma - center) |b_gamma|
  double weighted_mass = 0.0;
  bool aligned = false;
  bool under_ceiling = false;
};

struct Theorem3Options {
  /// Balls are centered on spectrum points inside B(0, region).
  double region = 8.0;
  double kronecker_eps = 0.15;
  std::uint64_t seed = 1;
};

struct Theorem3Report {
  std::string spec_id;
  double eta = 0.0;
  std::vector<BallReport> balls;
  double c1 = 0.0;
  double c2 = 0.0;
  double ceiling = 0.0;
  bool translation_bounded = false;
  double max_core_mass = 0.0;
  std::size_t independent = 0;
  std::size_t dependent = 0;
  bool alignment_ok = true;
  bool ceiling_ok = true;
  bool pass = false;
};

Theorem3Report theorem3_harness(const LatticeCombSpec& spec, double eta,
                                const Theorem3Options& opts = {}, const std::string& spec_id = "");

struct AlignmentTrial {
  std::vector<std::string> frequencies;
  std::vector<Complex> masses;
  std::string status;
  KroneckerSolution solution;
  double re_sum = 0.0;
  double mass = 0.0;
  bool pass = false;
};

/// Seeded trials: k <= max_freqs frequencies c + sqrt(p)/50 (p prime, c
/// rational), random unit-modulus masses, aligned with eps = 0.15.
std::vector<AlignmentTrial> phase_alignment_trials(int count, std::uint64_t seed,
                                                   int max_freqs = 5);

/// Aligns sum b_j e^{2 pi i x gamma_j} so that each term has real part > |b_j|/2.
AlignmentTrial align_phases(const KroneckerInstance& frequencies, const std::vector<Complex>& masses,
                            const SolveOptions& opts = {});

struct CorpusEntry {
  std::string id;
  LatticeCombSpec spec;
  /// All masses of mu are nonnegative reals.
  bool nonnegative = false;
};

/// unit comb d=1, scaled comb (basis 2), shifted comb (lambda = 1/2),
/// modulated comb (alpha = 0.3), unit square lattice d=2.
std::vector<CorpusEntry> builtin_corpus(double window_1d = 120.0, double window_2d = 40.0);

}  // namespace cryst
