#pragma once

#include "dissip/linalg.hpp"

namespace dissip {

/// Finite-dimensional linear system xdot = Ax + Bu, y = Cx + Du.
/// Empty input (m = 0) and output (p = 0) dimensions are allowed.
struct StateSpaceSystem {
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix C;  // p x n
    Matrix D;  // p x m

    StateSpaceSystem(Matrix a, Matrix b, Matrix c, Matrix d);

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index p() const { return C.rows(); }
};

/// Quadratic supply rate s(y, u) = [y; u]* [[Q, S], [S*, R]] [y; u].
struct SupplyRate {
    HermitianMatrix Q;  // p x p
    Matrix S;           // p x m
    HermitianMatrix R;  // m x m

    SupplyRate(HermitianMatrix q, Matrix s, HermitianMatrix r);

    Eigen::Index p() const { return Q.dim(); }
    Eigen::Index m() const { return R.dim(); }

    /// The full Hermitian block [[Q, S], [S*, R]].
    HermitianMatrix block() const;
};

/// Quadratic storage function S(x) = x* P x.
struct QuadraticStorage {
    HermitianMatrix P;

    explicit QuadraticStorage(HermitianMatrix p) : P(std::move(p)) {}

    Eigen::Index n() const { return P.dim(); }
    double eval(const Vector& x) const;
};

/// Evaluate the supply rate; the roundoff imaginary part is checked and discarded.
double supply_eval(const SupplyRate& sr, const Vector& y, const Vector& u);

/// Scattering-passive supply: Q = -I_p, S = 0, R = I_m.
SupplyRate make_scattering_supply(Eigen::Index p, Eigen::Index m);

/// Impedance-passive supply on C^m (Riesz map is the identity): s(y, u) = 2 Re(y* u).
SupplyRate make_impedance_supply(Eigen::Index m);

/// PSD certificate for the supply block [[Q, S], [S*, R]].
PsdCertificate supply_is_nonneg(const SupplyRate& sr, double tol = kDefaultTol);

/// Internal-passivity storage S(x) = -||x||^2, i.e. P = -I_n.
QuadraticStorage internal_passivity_storage(Eigen::Index n);

}  // namespace dissip
