#include "cryst/point.hpp"

#include <cmath>
#include <sstream>

#include "cryst/errors.hpp"

namespace cryst {

void require_dim(int dim) {
  if (dim < 1 || dim > Point::kMaxDim) {
    throw ConfigError("dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
}

Point::Point(int dim) : dim_(dim) { require_dim(dim); }

Point::Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
  require_dim(dim_);
  std::size_t i = 0;
  for (double v : coords) c_[i++] = v;
}

Point Point::from(std::span<const double> coords) {
  Point p(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p.c_[i] = coords[i];
  return p;
}

double Point::norm2() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

double Point::norm() const { return std::sqrt(norm2()); }

bool Point::finite() const {
  for (int i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

Point& Point::operator+=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

std::partial_ordering operator<=>(const Point& a, const Point& b) {
  for (int i = 0; i < Point::kMaxDim; ++i) {
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  }
  return a.dim_ <=> b.dim_;
}

std::string Point::str() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? ", " : "") << c_[i];
  os << ')';
  return os.str();
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

}  // namespace cryst
