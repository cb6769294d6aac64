#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fdisac {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Thrown when a configuration or argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mainlobe power of a transmit covariance is too small to form an ISMR.
class DegenerateBeampattern : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Real part of the Hermitian form x^H M x.
inline double quad_form(const CVec& x, const CMat& m) {
  return (x.adjoint() * m * x)(0, 0).real();
}

/// Re tr(A B) for Hermitian A, B without forming the product.
inline double trace_product(const CMat& a, const CMat& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace fdisac
