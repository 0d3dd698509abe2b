#pragma once

#include <Eigen/Dense>
#include <complex>

namespace stirap {

using Cplx = std::complex<double>;

// Levels never exceed four, so fixed-capacity matrices keep everything on the stack.
using CMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using CVec = Eigen::Matrix<Cplx, Eigen::Dynamic, 1, 0, 4, 1>;

inline constexpr Cplx kImag{0.0, 1.0};

}  // namespace stirap
