#pragma once

#include <optional>
#include <vector>

#include "cryst/measure.hpp"
#include "cryst/test_function.hpp"

namespace cryst {

struct ConvolutionValue {
  Complex value;
  /// Estimated contribution of atoms beyond the window.
  double tail_bound = 0.0;
};

/// (mu * phi)(x) = sum_lambda a_lambda phi(x - lambda) over the in-window atoms.
/// growth_constant is C1 with |mu|(B(y, r)) <= C1 max{1, r}^d; when absent it
/// is estimated from the window.
ConvolutionValue convolve_measure(const AtomicMeasure& mu, const TestFunction& phi, const Point& x,
                                  std::optional<double> growth_constant = std::nullopt);

/// C1 = max over sampled centers and radii of |mu|(B(c, r)) / max{1, r}^d,
/// restricted to balls inside the window. Centers default to a deterministic
/// spread over the core.
double estimate_growth_constant(const AtomicMeasure& mu, std::vector<Point> centers = {});

struct Prop3Certificate {
  double c1 = 0.0;
  double c2 = 0.0;
  double bound = 0.0;
  double observed_sup = 0.0;
  Point argmax;
  double margin = 0.0;
  bool holds = false;
  std::size_t probes = 0;
};

/// sup_x |(mu * phi)(x)| <= (d + 1) C1 C2 with C2 = sup |phi(t)| max{1, |t|}^{d+1}.
/// Throws CheckRefused when mu does not look translation bounded.
Prop3Certificate prop3_certificate(const AtomicMeasure& mu, const TestFunction& phi,
                                   const std::vector<Point>& sample_points);

struct Prop2Certificate {
  double eta = 0.0;
  double r = 0.0;
  Point x0;
  double max_phi = 0.0;
  double hat_mu_ball_mass = 0.0;
  double rhs = 0.0;
  double max_lhs = 0.0;
  Point worst_center;
  double margin = 0.0;
  bool holds = false;
  std::size_t probes = 0;
  /// Lipschitz slack used when certifying phi^ > eta on B(x0, r).
  double lipschitz = 0.0;
};

/// mu(B(t, r)) <= eta^{-1} max|phi| |mu^|(B(0, 2 radius)) for phi = psi * psi~.
/// mu must have nonnegative masses. Throws NumericalError when phi^ has no
/// positive maximum (broken quadrature).
Prop2Certificate prop2_certificate(const BumpAutocorrelation& psi, const AtomicMeasure& mu,
                                   const AtomicMeasure& mu_hat,
                                   const std::vector<Point>& trial_centers);

}  // namespace cryst
