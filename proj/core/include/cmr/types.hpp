#ifndef CMR_TYPES_HPP
#define CMR_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace cmr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

} // namespace cmr

#endif
