#include "stirap/spline.hpp"

#include <algorithm>
#include <cmath>

#include "stirap/errors.hpp"

namespace stirap {

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<Complex> values)
    : x_(std::move(knots)), y_(std::move(values)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw ConfigError("spline: knot/value count mismatch");
  if (n < 2) throw ConfigError("spline: need at least two knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw ConfigError("spline: knots must be strictly increasing");
  }
  for (const auto& v : y_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("spline: non-finite sample");
    }
  }

  // Thomas algorithm on the natural-spline tridiagonal system.
  m_.assign(n, Complex{});
  if (n == 2) return;
  std::vector<double> c(n, 0.0);
  std::vector<Complex> d(n, Complex{});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0 / 6.0;
    const double b = (h0 + h1) / 3.0;
    const double cc = h1 / 6.0;
    const Complex rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
  }
}

std::size_t CubicSpline::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

Complex CubicSpline::operator()(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h / 6.0);
}

Complex CubicSpline::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * (h / 6.0);
}

// Integral of segment i from x_i to x_i + dx.
Complex CubicSpline::primitive(std::size_t i, double dx) const {
  const double h = x_[i + 1] - x_[i];
  const double u = dx / h;  // fraction of the segment covered
  // With a = 1 - s, b = s, s in [0, u]:
  //   int a ds = u - u^2/2, int b ds = u^2/2
  //   int (a^3 - a) ds = (1 - (1-u)^4)/4 - (u - u^2/2)
  //   int (b^3 - b) ds = u^4/4 - u^2/2
  const double ia = u - 0.5 * u * u;
  const double ib = 0.5 * u * u;
  const double one_minus = 1.0 - u;
  const double ia3 = 0.25 * (1.0 - one_minus * one_minus * one_minus * one_minus) - ia;
  const double ib3 = 0.25 * u * u * u * u - ib;
  return h * (ia * y_[i] + ib * y_[i + 1] + (ia3 * m_[i] + ib3 * m_[i + 1]) * (h * h / 6.0));
}

Complex CubicSpline::integral(double a, double b) const {
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  a = std::clamp(a, x_.front(), x_.back());
  b = std::clamp(b, x_.front(), x_.back());
  if (b <= a) return {};
  const std::size_t ia = segment(a);
  const std::size_t ib = segment(b);
  Complex total;
  if (ia == ib) {
    total = primitive(ia, b - x_[ia]) - primitive(ia, a - x_[ia]);
  } else {
    total = primitive(ia, x_[ia + 1] - x_[ia]) - primitive(ia, a - x_[ia]);
    for (std::size_t i = ia + 1; i < ib; ++i) total += primitive(i, x_[i + 1] - x_[i]);
    total += primitive(ib, b - x_[ib]);
  }
  return sign * total;
}

}  // namespace stirap
