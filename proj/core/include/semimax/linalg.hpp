#pragma once

#include <complex>

#include <Eigen/Dense>

namespace semimax {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using CVec6 = Eigen::Matrix<std::complex<double>, 6, 1>;
using CMat6 = Eigen::Matrix<std::complex<double>, 6, 6>;
using Complex = std::complex<double>;

}  // namespace semimax
