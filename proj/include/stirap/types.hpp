#pragma once

#include <complex>

#include <Eigen/Dense>

namespace stirap {

using Complex = std::complex<double>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Hamiltonian = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace stirap
