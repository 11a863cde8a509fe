#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nlevel {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace nlevel
