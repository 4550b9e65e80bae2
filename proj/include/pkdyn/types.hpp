#pragma once

#include <complex>
#include <limits>

#include <Eigen/Core>

namespace pkdyn {

using Complex = std::complex<double>;

// Homogeneous coordinate vectors live in C^{k+1} with k <= 3; fixed max size
// keeps them stack-allocated.
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using CMat =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double x) { return x == kNegInf; }

}  // namespace pkdyn
