#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace odeim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy; the CLI maps each class to a distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid algebra, rank, node index, or argument outside the operation domain
struct DomainError : Error {
    using Error::Error;
};

// ell not generic: tied/resonant eigenvalues of the ell-matrix
struct GenericityError : Error {
    using Error::Error;
};

// adaptive integrator could not proceed; carries the failure location
struct IntegrationError : Error {
    Complex where;
    IntegrationError(const std::string& msg, Complex loc) : Error(msg), where(loc) {}
};

// requested accuracy not reachable with current parameters
struct AccuracyError : Error {
    using Error::Error;
};

// self-check of a matrix construction failed (residual above threshold)
struct ConstructionError : Error {
    using Error::Error;
};

}  // namespace odeim
