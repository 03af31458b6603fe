#pragma once

#include <complex>

#include <Eigen/Dense>

namespace frachill {

using cdouble = std::complex<double>;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

}  // namespace frachill
