#include "dissip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dissip {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eig(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.entries());
    if (es.info() != Eigen::Success) {
        throw EigensolverError(static_cast<int>(m.dim()));
    }
    return es;
}

double operator_norm(const Eigen::VectorXd& eigenvalues) {
    if (eigenvalues.size() == 0) return 0.0;
    return eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("HermitianMatrix requires a square matrix");
    }
    const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    const double asym = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, scale)) {
        throw DimensionError("matrix is not Hermitian within construction tolerance");
    }
    entries_ = 0.5 * (m + m.adjoint().eval());
}

PsdCertificate check_psd(const HermitianMatrix& m, double tol) {
    if (tol < 0) throw PreconditionError("check_psd: tol must be nonnegative");
    if (m.dim() == 0) return {true, 0.0, tol};
    const auto es = hermitian_eig(m);
    const double min_eig = es.eigenvalues()(0);
    const double tol_used = tol * std::max(1.0, operator_norm(es.eigenvalues()));
    return {min_eig >= -tol_used, min_eig, tol_used};
}

HermitianMatrix hermitian_sqrt(const HermitianMatrix& m, double tol) {
    const auto es = hermitian_eig(m);
    const Eigen::Index n = m.dim();
    if (n == 0) return m;
    const double tol_used = tol * std::max(1.0, operator_norm(es.eigenvalues()));
    Eigen::VectorXd lambda = es.eigenvalues();
    if (lambda(0) < -tol_used) {
        throw DefinitenessError("hermitian_sqrt: matrix is indefinite", lambda(0));
    }
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();
    Matrix root = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
    return HermitianMatrix(root);
}

FactorCertificate rank_revealing_factor(const HermitianMatrix& m, double tol) {
    const Eigen::Index n = m.dim();
    if (n == 0) return {Matrix(0, 0), 0, 0.0};
    const auto es = hermitian_eig(m);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const double tol_used = tol * std::max(1.0, operator_norm(lambda));
    if (lambda(0) < -tol_used) {
        throw DefinitenessError("rank_revealing_factor: matrix is indefinite", lambda(0));
    }

    // Eigen sorts ascending; take eigenvalues above the rank cutoff, largest first.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (lambda(i) > tol_used) kept.push_back(i);
    }
    const Eigen::Index q = static_cast<Eigen::Index>(kept.size());

    Matrix factor(q, n);
    for (Eigen::Index r = 0; r < q; ++r) {
        Vector row = std::sqrt(lambda(kept[r])) * es.eigenvectors().col(kept[r]).conjugate();
        // Phase convention: first entry of nonnegligible magnitude made real positive.
        const double row_scale = row.cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(row(j)) > 1e-10 * row_scale) {
                row *= std::conj(row(j)) / std::abs(row(j));
                break;
            }
        }
        factor.row(r) = row.transpose();
    }
    const double residual = (m.entries() - factor.adjoint() * factor).norm();
    return {std::move(factor), q, residual};
}

HermitianMatrix solve_lyapunov(const Matrix& a, const HermitianMatrix& q_rhs) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || q_rhs.dim() != n) {
        throw DimensionError("solve_lyapunov: dimension mismatch");
    }
    if (n > kLyapunovMaxDim) {
        throw SizeError("solve_lyapunov: dimension exceeds dense-solver cap of " +
                        std::to_string(kLyapunovMaxDim));
    }
    if (n == 0) return HermitianMatrix(Matrix(0, 0));

    // Reduce to triangular form: A = U T U*, then T* Wt + Wt T = -U* Q U,
    // solvable column by column by forward substitution.
    Eigen::ComplexSchur<Matrix> schur(a);
    if (schur.info() != Eigen::Success) {
        throw EigensolverError(static_cast<int>(n));
    }
    const Matrix& t = schur.matrixT();
    const Matrix& u = schur.matrixU();
    const Matrix rhs = -(u.adjoint() * q_rhs.entries() * u);

    const double spectral_scale = t.diagonal().cwiseAbs().maxCoeff();
    Matrix wt(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector col = rhs.col(j);
        for (Eigen::Index k = 0; k < j; ++k) {
            col -= t(k, j) * wt.col(k);
        }
        // Solve (T* + t_jj I) w_j = col; the system matrix is lower triangular.
        Matrix sys = t.adjoint();
        sys.diagonal().array() += t(j, j);
        const double min_diag = sys.diagonal().cwiseAbs().minCoeff();
        if (min_diag < 1e-13 * std::max(1.0, spectral_scale)) {
            throw SpectralCompatibilityError(
                "solve_lyapunov: spectra of A and -A* are not disjoint");
        }
        wt.col(j) = sys.triangularView<Eigen::Lower>().solve(col);
    }
    Matrix w = u * wt * u.adjoint();
    w = 0.5 * (w + w.adjoint().eval());
    return HermitianMatrix(w);
}

namespace {

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix.
Matrix hermitian_pinv(const HermitianMatrix& m, double rel_tol) {
    const auto es = hermitian_eig(m);
    const Eigen::Index n = m.dim();
    if (n == 0) return Matrix(0, 0);
    const double cutoff = rel_tol * std::max(1.0, operator_norm(es.eigenvalues()));
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (es.eigenvalues()(i) > cutoff) inv(i) = 1.0 / es.eigenvalues()(i);
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_abscissa(const Matrix& m) {
    if (m.rows() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

/// Stabilizing feedback gain by a pole-shifting Lyapunov construction:
/// solve (A + sigma I) Z + Z (A + sigma I)* = 2 B B* with sigma beyond the
/// spectrum of A, then K0 = B* Z^+.
Matrix initial_stabilizing_gain(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    if (spectral_abscissa(a) < 0) return Matrix::Zero(m, n);

    Eigen::ComplexEigenSolver<Matrix> es(a, false);
    const double sigma = es.eigenvalues().real().cwiseAbs().maxCoeff() + 1.0;
    const Matrix shifted = (a + sigma * Matrix::Identity(n, n)).adjoint();
    const HermitianMatrix rhs(Matrix(-2.0 * b * b.adjoint()));
    const HermitianMatrix z = solve_lyapunov(shifted, rhs);
    return b.adjoint() * hermitian_pinv(z, 1e-10);
}

}  // namespace

HermitianMatrix solve_care(const Matrix& a, const Matrix& b, const HermitianMatrix& q,
                           const HermitianMatrix& r, const Matrix& s) {
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    if (a.cols() != n || b.rows() != n || q.dim() != n || r.dim() != m ||
        s.rows() != n || s.cols() != m) {
        throw DimensionError("solve_care: dimension mismatch");
    }
    if (m > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es_r(r.entries());
        if (es_r.info() != Eigen::Success) throw EigensolverError(static_cast<int>(m));
        if (es_r.eigenvalues()(0) <= 1e-9) {
            throw DefinitenessError("solve_care: R must be positive definite",
                                    es_r.eigenvalues()(0));
        }
    }
    auto stab = is_stabilizable(a, b);
    if (!stab.stabilizable) {
        throw StabilizabilityError("solve_care: (A, B) is not stabilizable",
                                   stab.offending_eigenvalues);
    }

    const Matrix r_inv = m > 0 ? r.entries().llt().solve(Matrix::Identity(m, m)) : Matrix(0, 0);
    Matrix k = initial_stabilizing_gain(a, b);
    if (spectral_abscissa(a - b * k) >= 0) {
        throw ConvergenceError("solve_care: initial feedback failed to stabilize", {});
    }

    auto riccati_residual = [&](const Matrix& p) {
        const Matrix g = p * b + s;
        return (a.adjoint() * p + p * a + q.entries() - g * r_inv * g.adjoint()).norm();
    };

    std::vector<double> history;
    Matrix p = Matrix::Zero(n, n);
    for (int iter = 0; iter < 100; ++iter) {
        const Matrix a_cl = a - b * k;
        Matrix rhs = q.entries() + k.adjoint() * r.entries() * k - s * k - k.adjoint() * s.adjoint();
        rhs = 0.5 * (rhs + rhs.adjoint().eval());
        p = solve_lyapunov(a_cl, HermitianMatrix(rhs)).entries();
        k = r_inv * (b.adjoint() * p + s.adjoint());

        const double res = riccati_residual(p);
        history.push_back(res);
        if (res <= 1e-10 * (1.0 + p.norm())) {
            HermitianMatrix result{p};
            if (spectral_abscissa(a - b * k) >= 0) {
                throw ConvergenceError("solve_care: converged solution is not stabilizing",
                                       std::move(history));
            }
            return result;
        }
    }
    throw ConvergenceError("solve_care: Newton iteration did not converge in 100 steps",
                           std::move(history));
}

StabilizabilityResult is_stabilizable(const Matrix& a, const Matrix& b, double tol) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.rows() != n) {
        throw DimensionError("is_stabilizable: dimension mismatch");
    }
    if (n == 0) return {true, {}};
    Eigen::ComplexEigenSolver<Matrix> es(a, false);
    StabilizabilityResult result{true, {}};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lambda = es.eigenvalues()(i);
        if (lambda.real() < -tol) continue;
        Matrix pbh(n, n + b.cols());
        pbh << a - lambda * Matrix::Identity(n, n), b;
        Eigen::JacobiSVD<Matrix> svd(pbh);
        const double sigma_max = svd.singularValues()(0);
        const Eigen::Index rank =
            (svd.singularValues().array() > tol * sigma_max).count();
        if (rank < n) {
            result.stabilizable = false;
            result.offending_eigenvalues.push_back(lambda);
        }
    }
    return result;
}

}  // namespace dissip
