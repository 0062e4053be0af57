#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "cryst/measure.hpp"
#include "cryst/point.hpp"

namespace cryst {

/// Full-rank lattice B Z^d; basis vectors are the columns of B.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis);
  static Lattice scaled_integer(int dim, double spacing = 1.0);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  double covolume() const { return std::abs(basis_.determinant()); }

  Point point(const Eigen::VectorXd& coeffs) const;

  /// Points of L + shift inside the open ball B(0, radius).
  std::vector<Point> points_in_ball(const Point& shift, double radius,
                                    std::size_t cap = 10'000'000) const;

  /// Length of a shortest nonzero lattice vector.
  double shortest_vector_length() const;

 private:
  Eigen::MatrixXd basis_;
};

/// L* = { y : <x, y> in Z for all x in L }, basis B^{-T}.
Lattice dual_lattice(const Lattice& lattice);

/// true when both bases generate the same lattice: the change-of-basis matrix
/// is integral with determinant +-1.
bool same_lattice(const Lattice& a, const Lattice& b, double tol = 1e-9);

struct Mode {
  Complex beta;
  Point alpha;
};

struct ShiftedLatticeTerm {
  Lattice lattice;
  Point shift;
  std::vector<Mode> modes;
};

/// mu = sum_j sum_{x in L_j + lambda_j} [sum_s beta_{j,s} e^{2 pi i <x, alpha_{j,s}>}] delta_x,
/// restricted to B(0, window).
struct LatticeCombSpec {
  int dim = 1;
  double window = 1.0;
  std::vector<ShiftedLatticeTerm> terms;

  void validate() const;
};

struct RealizeOptions {
  std::size_t atom_cap = 10'000'000;
  /// Overrides spec.window when positive.
  double window = 0.0;
};

AtomicMeasure realize_measure(const LatticeCombSpec& spec, const RealizeOptions& opts = {});

/// Closed-form Fourier transform of the comb: for every mode, atoms at
/// alpha + gamma (gamma in L*) with mass beta e^{-2 pi i <lambda, gamma>} / covol(L).
AtomicMeasure fourier_of_spec(const LatticeCombSpec& spec, const RealizeOptions& opts = {});

/// Sum over terms of sum_s |beta_{j,s}|: bounds every atom mass of a term.
double term_mass_bound(const ShiftedLatticeTerm& term);

/// e^{2 pi i s} with the argument reduced mod 1 first.
Complex unit_phase(double s);

}  // namespace cryst
