#pragma once

#include <span>
#include <vector>

#include "stirap/types.hpp"

namespace stirap {

// Natural cubic spline through complex samples (real and imaginary parts
// interpolated independently). Knots must be strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> knots, std::vector<Complex> values);

  Complex operator()(double x) const;
  Complex derivative(double x) const;
  // Exact integral of the interpolant over [a, b] clipped to the knot range.
  Complex integral(double a, double b) const;

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<Complex>& values() const noexcept { return y_; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;
  Complex primitive(std::size_t i, double dx) const;

  std::vector<double> x_;
  std::vector<Complex> y_;
  std::vector<Complex> m_;  // second derivatives at the knots
};

}  // namespace stirap
