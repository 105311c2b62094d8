#pragma once

#include <complex>

#include <Eigen/Dense>

namespace decolab {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Tolerances shared by the kinematic invariants.
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityFloor = -1e-10;

}  // namespace decolab
