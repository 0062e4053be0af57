#pragma once

#include <array>
#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cryst {

/// A point of R^d for d in {1, 2, 3}. Unused trailing coordinates are zero.
class Point {
 public:
  static constexpr int kMaxDim = 3;

  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<double> coords);
  static Point from(std::span<const double> coords);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  double norm2() const;
  double norm() const;
  bool finite() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  Point operator-() const { return *this * -1.0; }

  friend bool operator==(const Point& a, const Point& b) = default;
  /// Lexicographic in the coordinates; only meaningful for equal dimensions.
  friend std::partial_ordering operator<=>(const Point& a, const Point& b);

  std::string str() const;

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> c_{};
};

double dot(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);

/// Throws ConfigError unless 1 <= dim <= 3.
void require_dim(int dim);

}  // namespace cryst
