#include "dissip/system.hpp"

#include <cmath>

namespace dissip {

StateSpaceSystem::StateSpaceSystem(Matrix a, Matrix b, Matrix c, Matrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    if (A.rows() != A.cols()) throw DimensionError("A must be square");
    if (B.rows() != A.rows()) throw DimensionError("B row count must equal state dimension");
    if (C.cols() != A.rows()) throw DimensionError("C column count must equal state dimension");
    if (D.rows() != C.rows() || D.cols() != B.cols()) {
        throw DimensionError("D must be p x m");
    }
}

SupplyRate::SupplyRate(HermitianMatrix q, Matrix s, HermitianMatrix r)
    : Q(std::move(q)), S(std::move(s)), R(std::move(r)) {
    if (S.rows() != Q.dim() || S.cols() != R.dim()) {
        throw DimensionError("supply coupling S must be p x m");
    }
}

HermitianMatrix SupplyRate::block() const {
    const Eigen::Index pp = p(), mm = m();
    Matrix full(pp + mm, pp + mm);
    full.topLeftCorner(pp, pp) = Q.entries();
    full.topRightCorner(pp, mm) = S;
    full.bottomLeftCorner(mm, pp) = S.adjoint();
    full.bottomRightCorner(mm, mm) = R.entries();
    return HermitianMatrix(full);
}

double QuadraticStorage::eval(const Vector& x) const {
    if (x.size() != P.dim()) throw DimensionError("storage eval: state dimension mismatch");
    return (x.adjoint() * P.entries() * x)(0).real();
}

double supply_eval(const SupplyRate& sr, const Vector& y, const Vector& u) {
    if (y.size() != sr.p() || u.size() != sr.m()) {
        throw DimensionError("supply_eval: dimension mismatch");
    }
    Vector z(y.size() + u.size());
    z << y, u;
    const Complex value = (z.adjoint() * sr.block().entries() * z)(0);
    const double scale = y.squaredNorm() + u.squaredNorm();
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, scale)) {
        throw DimensionError("supply_eval: quadratic form has non-real value");
    }
    return value.real();
}

SupplyRate make_scattering_supply(Eigen::Index p, Eigen::Index m) {
    return SupplyRate(HermitianMatrix(Matrix(-Matrix::Identity(p, p))), Matrix::Zero(p, m),
                      HermitianMatrix::Identity(m));
}

SupplyRate make_impedance_supply(Eigen::Index m) {
    return SupplyRate(HermitianMatrix::Zero(m), Matrix::Identity(m, m), HermitianMatrix::Zero(m));
}

PsdCertificate supply_is_nonneg(const SupplyRate& sr, double tol) {
    return check_psd(sr.block(), tol);
}

QuadraticStorage internal_passivity_storage(Eigen::Index n) {
    return QuadraticStorage(HermitianMatrix(Matrix(-Matrix::Identity(n, n))));
}

}  // namespace dissip
