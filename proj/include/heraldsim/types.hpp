#pragma once

#include <complex>
#include <Eigen/Dense>

namespace heraldsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr Complex imag_unit{0.0, 1.0};

inline constexpr const char* version_string = "0.1.0";

} // namespace heraldsim
