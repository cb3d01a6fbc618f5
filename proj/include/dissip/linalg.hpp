#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dissip/errors.hpp"

namespace dissip {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default relative tolerance for definiteness and rank decisions.
inline constexpr double kDefaultTol = 1e-9;

/// Hard cap for the dense Lyapunov solver.
inline constexpr int kLyapunovMaxDim = 400;

/// A square matrix kept exactly Hermitian. Construction symmetrizes the
/// input and rejects it if the asymmetry exceeds 1e-12 relative to the
/// largest entry magnitude.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Matrix& m);

    static HermitianMatrix Zero(Eigen::Index dim) { return HermitianMatrix(Matrix::Zero(dim, dim)); }
    static HermitianMatrix Identity(Eigen::Index dim) { return HermitianMatrix(Matrix::Identity(dim, dim)); }

    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    double frobenius_norm() const { return entries_.norm(); }

private:
    Matrix entries_;
};

struct PsdCertificate {
    bool is_psd;
    double min_eigenvalue;
    double tolerance_used;  // effective absolute tolerance
};

struct FactorCertificate {
    Matrix factor;                  // q x n, rows are scaled eigenvectors
    Eigen::Index rank;              // number of rows of factor
    double reconstruction_residual; // ||M - factor* factor||_F
};

struct StabilizabilityResult {
    bool stabilizable;
    std::vector<Complex> offending_eigenvalues;
};

/// Certify positive semidefiniteness. The effective tolerance is
/// tol * max(1, ||M||_2).
PsdCertificate check_psd(const HermitianMatrix& m, double tol = kDefaultTol);

/// Hermitian PSD square root. Eigenvalues in [-tol_eff, 0) are clamped to
/// zero; eigenvalues below -tol_eff raise DefinitenessError.
HermitianMatrix hermitian_sqrt(const HermitianMatrix& m, double tol = kDefaultTol);

/// Deterministic rank-revealing factorization M = F* F of a PSD matrix.
/// Rows of F are sqrt(lambda_i) v_i*, ordered by decreasing eigenvalue and
/// phase-normalized so each row's first nonzero entry is real positive.
FactorCertificate rank_revealing_factor(const HermitianMatrix& m, double tol = kDefaultTol);

/// Solve A* W + W A + Q = 0 for Hermitian W (dense, n <= kLyapunovMaxDim).
HermitianMatrix solve_lyapunov(const Matrix& a, const HermitianMatrix& q_rhs);

/// Stabilizing solution of A*P + PA + Q - (PB + S) R^{-1} (PB + S)* = 0 by
/// Newton-Kleinman iteration with dense Lyapunov inner solves.
HermitianMatrix solve_care(const Matrix& a, const Matrix& b, const HermitianMatrix& q,
                           const HermitianMatrix& r, const Matrix& s);

/// Finite-dimensional PBH test: every eigenvalue of A with Re >= -tol must
/// leave [A - lambda I, B] with full row rank.
StabilizabilityResult is_stabilizable(const Matrix& a, const Matrix& b, double tol = kDefaultTol);

}  // namespace dissip
