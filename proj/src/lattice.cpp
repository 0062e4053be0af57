#include "cryst/lattice.hpp"

#include <cmath>
#include <numbers>

#include "cryst/errors.hpp"

namespace cryst {

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols()) throw ConfigError("lattice basis must be square");
  require_dim(static_cast<int>(basis_.rows()));
  if (!basis_.allFinite()) throw ConfigError("lattice basis is not finite");
  double scale = 1.0;
  for (int j = 0; j < basis_.cols(); ++j) scale *= basis_.col(j).norm();
  if (!(std::abs(basis_.determinant()) > 1e-12 * scale)) {
    throw ConfigError("lattice basis is singular");
  }
}

Lattice Lattice::scaled_integer(int dim, double spacing) {
  require_dim(dim);
  return Lattice(spacing * Eigen::MatrixXd::Identity(dim, dim));
}

Point Lattice::point(const Eigen::VectorXd& coeffs) const {
  Eigen::VectorXd v = basis_ * coeffs;
  return Point::from({v.data(), static_cast<std::size_t>(v.size())});
}

std::vector<Point> Lattice::points_in_ball(const Point& shift, double radius,
                                           std::size_t cap) const {
  const int d = dim();
  if (shift.dim() != d) throw ConfigError("shift dimension does not match lattice");
  // n = B^{-1}(x - shift) with |x| < radius bounds each n_i by row norms of B^{-1}.
  const Eigen::MatrixXd inv = basis_.inverse();
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i) s(i) = shift[i];
  const Eigen::VectorXd center = -inv * s;
  std::array<long, 3> lo{}, hi{};
  double box = 1.0;
  for (int i = 0; i < d; ++i) {
    const double ext = inv.row(i).norm() * radius;
    lo[i] = static_cast<long>(std::floor(center(i) - ext));
    hi[i] = static_cast<long>(std::ceil(center(i) + ext));
    box *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  // The box holds at most a constant factor more points than the ball.
  if (box > 8.0 * static_cast<double>(cap)) {
    throw ResourceError("lattice enumeration exceeds the atom cap");
  }
  std::vector<Point> out;
  std::array<long, 3> n{};
  Eigen::VectorXd coeff(d);
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      for (int i = 0; i < d; ++i) coeff(i) = static_cast<double>(n[i]);
      Point x = point(coeff) + shift;
      if (x.norm() < radius) {
        if (out.size() >= cap) throw ResourceError("lattice enumeration exceeds the atom cap");
        out.push_back(x);
      }
      return;
    }
    for (n[axis] = lo[axis]; n[axis] <= hi[axis]; ++n[axis]) self(self, axis + 1);
  };
  rec(rec, 0);
  return out;
}

double Lattice::shortest_vector_length() const {
  double r = basis_.col(0).norm();
  for (int j = 1; j < basis_.cols(); ++j) r = std::min(r, basis_.col(j).norm());
  double best = r;
  for (const Point& p : points_in_ball(Point(dim()), r * (1.0 + 1e-9))) {
    const double n = p.norm();
    if (n > 0.0) best = std::min(best, n);
  }
  return best;
}

Lattice dual_lattice(const Lattice& lattice) {
  return Lattice(lattice.basis().inverse().transpose());
}

bool same_lattice(const Lattice& a, const Lattice& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const Eigen::MatrixXd change = a.basis().inverse() * b.basis();
  for (int i = 0; i < change.rows(); ++i) {
    for (int j = 0; j < change.cols(); ++j) {
      if (std::abs(change(i, j) - std::round(change(i, j))) > tol) return false;
    }
  }
  return std::abs(std::abs(change.determinant()) - 1.0) < tol;
}

void LatticeCombSpec::validate() const {
  require_dim(dim);
  if (!(window > 0.0)) throw ConfigError("spec window must be positive");
  for (const ShiftedLatticeTerm& t : terms) {
    if (t.lattice.dim() != dim || t.shift.dim() != dim) {
      throw ConfigError("all terms must share the spec dimension");
    }
    if (t.modes.empty()) throw ConfigError("every term needs at least one mode");
    for (const Mode& m : t.modes) {
      if (m.alpha.dim() != dim) throw ConfigError("mode frequency dimension mismatch");
    }
  }
}

double term_mass_bound(const ShiftedLatticeTerm& term) {
  double s = 0.0;
  for (const Mode& m : term.modes) s += std::abs(m.beta);
  return s;
}

Complex unit_phase(double s) {
  const double frac = s - std::round(s);
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

AtomicMeasure realize_measure(const LatticeCombSpec& spec, const RealizeOptions& opts) {
  spec.validate();
  const double w = opts.window > 0.0 ? opts.window : spec.window;
  std::vector<Atom> atoms;
  for (const ShiftedLatticeTerm& t : spec.terms) {
    for (const Point& x : t.lattice.points_in_ball(t.shift, w, opts.atom_cap)) {
      Complex mass = 0.0;
      for (const Mode& m : t.modes) mass += m.beta * unit_phase(dot(x, m.alpha));
      atoms.push_back({x, mass});
      if (atoms.size() > opts.atom_cap) throw ResourceError("realized measure exceeds the atom cap");
    }
  }
  return AtomicMeasure::build(spec.dim, w, std::move(atoms));
}

AtomicMeasure fourier_of_spec(const LatticeCombSpec& spec, const RealizeOptions& opts) {
  spec.validate();
  const double w = opts.window > 0.0 ? opts.window : spec.window;
  std::vector<Atom> atoms;
  for (const ShiftedLatticeTerm& t : spec.terms) {
    const Lattice dual = dual_lattice(t.lattice);
    const double inv_cov = 1.0 / t.lattice.covolume();
    for (const Mode& m : t.modes) {
      for (const Point& y : dual.points_in_ball(m.alpha, w, opts.atom_cap)) {
        const Point gamma = y - m.alpha;
        atoms.push_back({y, inv_cov * m.beta * unit_phase(-dot(t.shift, gamma))});
        if (atoms.size() > opts.atom_cap) throw ResourceError("spectrum exceeds the atom cap");
      }
    }
  }
  return AtomicMeasure::build(spec.dim, w, std::move(atoms));
}

}  // namespace cryst
