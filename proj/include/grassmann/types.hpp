#pragma once

#include <complex>

#include <Eigen/Dense>

namespace grassmann {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace grassmann
