#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cryst/measure.hpp"
#include "cryst/point.hpp"
#include "cryst/test_function.hpp"

namespace cryst {

struct TrigTerm {
  Point omega;
  Complex a;
};

/// Finite Dirichlet series D(x) = sum_omega a_omega e^{2 pi i <x, omega>}.
/// Equal frequencies are merged on construction; zero coefficients dropped.
class TrigPolynomial {
 public:
  TrigPolynomial(int dim, std::vector<TrigTerm> terms);

  int dim() const { return dim_; }
  std::span<const TrigTerm> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  double abs_sum() const;
  double square_sum() const;

 private:
  int dim_;
  std::vector<TrigTerm> terms_;
};

Complex evaluate(const TrigPolynomial& d, const Point& x);

/// Mean of e^{i z u_1} over the unit ball of R^d.
double ball_kernel(int dim, double z);
/// An upper bound for |ball_kernel(dim, z)| decaying like 1/z.
double ball_kernel_bound(int dim, double z);
/// K with ball_kernel_bound(dim, z) <= K / z for all z > 0.
double ball_kernel_constant(int dim);

struct BohrEstimate {
  Complex value;
  double averaging_radius = 0.0;
  Point center;
  /// Bound on |value - c_omega|.
  double error_bound = 0.0;
};

/// Mean of D(t) e^{-2 pi i <t, omega>} over B(center, R), in closed form.
BohrEstimate bohr_coefficient(const TrigPolynomial& d, const Point& omega, double R,
                              const Point& center);

/// The same mean for an arbitrary function, by quadrature over the ball;
/// error_bound is the quadrature error estimate.
BohrEstimate bohr_coefficient(const std::function<Complex(const Point&)>& f, int dim,
                              const Point& omega, double R, const Point& center,
                              double abs_tol = 1e-9);

struct ParsevalRow {
  double R = 0.0;
  double mean_square = 0.0;
  double error_bound = 0.0;
};

struct ParsevalReport {
  std::vector<ParsevalRow> rows;
  /// sum |a_omega|^2.
  double limit = 0.0;
  /// |mean_square(R) - limit| <= constant / R.
  double constant = 0.0;
  /// c from fitting mean_square(R) = c + k / R over the schedule.
  double extrapolated = 0.0;
};

ParsevalReport parseval_check(const TrigPolynomial& d, const std::vector<double>& schedule,
                              const Point& center);

/// Least-squares c in values(R) = c + k / R.
double richardson_limit(std::span<const double> radii, std::span<const double> values);

/// sum |a_omega| |e^{2 pi i <tau, omega>} - 1|; below eps it certifies that tau
/// is an eps-almost period.
double period_defect(const TrigPolynomial& d, const Point& tau);

struct AlmostPeriodReport {
  double epsilon = 0.0;
  std::vector<Point> periods;
  double scan_range = 0.0;
  double scan_pitch = 0.0;
  /// d = 1: largest gap between consecutive periods in [0, scan_range];
  /// d >= 2: covering-radius estimate of the box by the periods.
  double max_gap = 0.0;
  double inclusion_length = 0.0;
};

AlmostPeriodReport almost_periods(const TrigPolynomial& d, double eps, double scan_range,
                                  double scan_pitch);

/// t -> sum_gamma b_gamma phi(-gamma) e^{2 pi i <t, gamma>}, which equals
/// (mu * phi^)(t) when mu^ = sum b_gamma delta_gamma.
TrigPolynomial convolution_trig_polynomial(const AtomicMeasure& mu_hat, const TestFunction& phi);

struct CoefficientRow {
  Point gamma;
  Complex closed_form;
  Complex quadrature;
  bool has_quadrature = false;
  Complex expected;
  double error_bound = 0.0;
  double quadrature_error = 0.0;
  bool agree = false;
};

struct CoefficientReport {
  std::vector<CoefficientRow> rows;
  double R = 0.0;
  Point center;
  /// max |trig(t) - sum a_lambda phi^(t - lambda)| over sample points.
  double pointwise_max_diff = 0.0;
  std::size_t pointwise_samples = 0;
  /// Atoms of mu farther than truncation_cutoff from t are dropped; their
  /// contribution is at most truncation_tail.
  double truncation_cutoff = 0.0;
  double truncation_tail = 0.0;
  bool ok = false;
};

struct CoefficientOptions {
  double R = 10.0;
  Point center;
  std::size_t pointwise_samples = 8;
  /// Quadrature route for the Bohr mean (d = 1 only).
  bool quadrature_route = true;
  double tolerance = 1e-5;
};

/// Computes the Bohr coefficients of mu * phi^ at the probe frequencies two
/// ways and compares them with b_gamma phi(-gamma). Throws NumericalError when
/// the routes disagree beyond tolerance.
CoefficientReport convolution_fourier_coefficients(const AtomicMeasure& mu,
                                                   const AtomicMeasure& mu_hat,
                                                   const TestFunction& phi,
                                                   const std::vector<Point>& probes,
                                                   const CoefficientOptions& opts);

}  // namespace cryst
