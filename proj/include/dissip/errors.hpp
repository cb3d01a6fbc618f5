#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dissip {

/// Base class for all analysis errors thrown by the library.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent matrix/vector dimensions.
class DimensionError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// Eigensolver failed to converge.
class EigensolverError : public AnalysisError {
public:
    explicit EigensolverError(int dim)
        : AnalysisError("Hermitian eigensolver failed to converge (dimension " + std::to_string(dim) + ")"),
          dim(dim) {}
    int dim;
};

/// A matrix required to be positive semidefinite is indefinite beyond tolerance.
class DefinitenessError : public AnalysisError {
public:
    DefinitenessError(const std::string& what, double min_eigenvalue)
        : AnalysisError(what + " (min eigenvalue " + std::to_string(min_eigenvalue) + ")"),
          min_eigenvalue(min_eigenvalue) {}
    double min_eigenvalue;
};

/// A and -A* share spectrum; the Lyapunov equation is singular.
class SpectralCompatibilityError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// (A, B) is not stabilizable.
class StabilizabilityError : public AnalysisError {
public:
    StabilizabilityError(const std::string& what, std::vector<std::complex<double>> offending)
        : AnalysisError(what), offending_eigenvalues(std::move(offending)) {}
    std::vector<std::complex<double>> offending_eigenvalues;
};

/// Iterative solver failed to converge.
class ConvergenceError : public AnalysisError {
public:
    ConvergenceError(const std::string& what, std::vector<double> residual_history)
        : AnalysisError(what), residual_history(std::move(residual_history)) {}
    std::vector<double> residual_history;
};

/// Simulated state left the range of finite doubles.
class DivergenceError : public AnalysisError {
public:
    DivergenceError(const std::string& what, std::size_t last_finite_index)
        : AnalysisError(what), last_finite_index(last_finite_index) {}
    std::size_t last_finite_index;
};

/// Problem size exceeds a documented hard cap.
class SizeError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// Time grid misaligned with the exact-shift propagator.
class AlignmentError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// Case excluded by a documented restriction (e.g. singular input weight).
class RestrictionError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// Precondition of an operation is violated.
class PreconditionError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

}  // namespace dissip
