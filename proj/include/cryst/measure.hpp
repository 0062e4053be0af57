#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cryst/point.hpp"

namespace cryst {

using Complex = std::complex<double>;

struct Atom {
  Point x;
  Complex mass;
};

/// Restriction to the open ball B(0, window) of a pure point measure
/// sum a_lambda delta_lambda.
///
/// Atoms are kept sorted lexicographically by location. Atoms at identical
/// locations are merged by summing their masses; locations closer than
/// kMinSeparation but not identical are rejected. Masses that vanish after
/// merging are dropped.
class AtomicMeasure {
 public:
  static constexpr double kMinSeparation = 1e-12;

  AtomicMeasure() = default;
  static AtomicMeasure build(int dim, double window, std::vector<Atom> atoms,
                             double margin = 0.0);

  int dim() const { return dim_; }
  double window() const { return window_; }
  /// Edge-exclusion zone used by sup and growth estimates.
  double margin() const { return margin_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// Same support, masses mapped through fn. Zero results are dropped.
  template <class Fn>
  AtomicMeasure map_masses(Fn&& fn) const {
    std::vector<Atom> out;
    out.reserve(atoms_.size());
    for (const Atom& a : atoms_) out.push_back({a.x, fn(a.mass)});
    return build(dim_, window_, std::move(out), margin_);
  }

  AtomicMeasure with_margin(double margin) const;

 private:
  int dim_ = 1;
  double window_ = 1.0;
  double margin_ = 0.0;
  std::vector<Atom> atoms_;
};

/// Atom-wise sum of two measures on the same window.
AtomicMeasure merge(const AtomicMeasure& a, const AtomicMeasure& b);
AtomicMeasure scale(const AtomicMeasure& m, Complex factor);

struct VariationResult {
  double value = 0.0;
  /// The ball leaves the window, so value is only a lower bound.
  bool truncated = false;
};

/// |mu|(B(center, r)) over the open ball.
VariationResult variation_on_ball(const AtomicMeasure& mu, const Point& center, double r);

/// Number of atoms in the open ball B(center, r).
std::size_t count_in_ball(const AtomicMeasure& mu, const Point& center, double r);

struct TranslationBoundReport {
  double ball_radius = 0.0;
  double sup_estimate = 0.0;
  Point argmax_center;
  std::size_t centers_scanned = 0;
  /// true for the exact d = 1 sweep; false means a certified lower bound.
  bool exact = false;
  double grid_pitch = 0.0;
};

struct TranslationBoundOptions {
  /// Pitch of the refinement grid for d >= 2; 0 selects ball_radius / 4.
  double grid_pitch = 0.0;
  /// Radius of the admissible center region; 0 selects W - max(margin, r).
  double core_radius = 0.0;
};

/// sup over centers c in B(0, W - max(margin, r)) of |mu|(B(c, r)).
TranslationBoundReport translation_bound_estimate(const AtomicMeasure& mu, double ball_radius,
                                                  const TranslationBoundOptions& opts = {});

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> variations;
  /// NaN when the log-log fit is rejected as non-polynomial.
  double fitted_exponent = 0.0;
  double fitted_constant = 0.0;
  double residual = 0.0;
  bool polynomial = true;
  std::size_t samples_used = 0;
};

constexpr double kGrowthResidualThreshold = 0.15;

/// Least-squares fit of log |mu|(B(0, r)) against log r.
GrowthReport growth_exponent(const AtomicMeasure& mu, std::vector<double> radii,
                             double residual_threshold = kGrowthResidualThreshold);

/// Fit of log y against log r for an arbitrary positive series.
GrowthReport fit_loglog(std::vector<double> radii, std::vector<double> values,
                        double residual_threshold = kGrowthResidualThreshold);

/// nu = sum |b_gamma|^2 delta_gamma.
AtomicMeasure squared_mass_measure(const AtomicMeasure& mu_hat);

/// sum |b_gamma|^q delta_gamma. Nothing is asserted about q < 2.
AtomicMeasure power_mass_measure(const AtomicMeasure& mu_hat, double q);

struct PartialMassBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  std::size_t count = 0;
};

/// Cauchy-Schwarz: sum_{|g|<r} |b| <= (sum |b|^2)^{1/2} (#{|g|<r})^{1/2}.
PartialMassBound partial_mass_bound_check(const AtomicMeasure& mu_hat, double r);

/// Heuristic translation-boundedness test on a finite window: polynomial
/// growth with exponent at most d + 0.1, and unit-ball sup over the full core
/// at most 1.5 times the sup over the inner half.
struct BoundednessCheck {
  bool bounded = true;
  double growth_exponent = 0.0;
  double inner_sup = 0.0;
  double outer_sup = 0.0;
  std::string reason;
};
BoundednessCheck looks_translation_bounded(const AtomicMeasure& mu);

}  // namespace cryst
