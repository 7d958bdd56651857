#ifndef RCEPC_TYPES_HPP
#define RCEPC_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace rcepc {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

}  // namespace rcepc

#endif
