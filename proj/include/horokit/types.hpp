#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace horokit {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cplx kI{0.0, 1.0};

// Typed errors, so callers and the CLI can map failures to exit codes.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace horokit
