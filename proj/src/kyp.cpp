#include "dissip/kyp.hpp"

namespace dissip {

namespace {

void check_shapes(const StateSpaceSystem& sys, const SupplyRate& sr, const QuadraticStorage& st) {
    if (sr.p() != sys.p() || sr.m() != sys.m()) {
        throw DimensionError("supply rate dimensions do not match the system");
    }
    if (st.n() != sys.n()) {
        throw DimensionError("storage dimension does not match the system");
    }
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint().eval()); }

}  // namespace

HermitianMatrix kyp_matrix(const StateSpaceSystem& sys, const SupplyRate& sr,
                           const QuadraticStorage& st) {
    check_shapes(sys, sr, st);
    const Eigen::Index n = sys.n(), m = sys.m();
    const Matrix& p = st.P.entries();

    // Each diagonal block is built as an exactly Hermitian sum so large
    // cancellations cannot leave roundoff asymmetry.
    const Matrix ap = sys.A.adjoint() * p;
    const Matrix ul = ap + ap.adjoint() + hermitize(sys.C.adjoint() * sr.Q.entries() * sys.C);
    const Matrix ur = p * sys.B + sys.C.adjoint() * sr.Q.entries() * sys.D + sys.C.adjoint() * sr.S;
    const Matrix ds = sys.D.adjoint() * sr.S;
    const Matrix lr = hermitize(sys.D.adjoint() * sr.Q.entries() * sys.D) + ds + ds.adjoint() +
                      sr.R.entries();

    Matrix full(n + m, n + m);
    full.topLeftCorner(n, n) = ul;
    full.topRightCorner(n, m) = ur;
    full.bottomLeftCorner(m, n) = ur.adjoint();
    full.bottomRightCorner(m, m) = lr;
    return HermitianMatrix(full);
}

KypReport check_dissipative(const StateSpaceSystem& sys, const SupplyRate& sr,
                            const QuadraticStorage& st, double tol) {
    HermitianMatrix kyp = kyp_matrix(sys, sr, st);
    PsdCertificate cert = check_psd(kyp, tol);
    return {std::move(kyp), cert, std::nullopt};
}

KypReport lure_factor(const StateSpaceSystem& sys, const SupplyRate& sr,
                      const QuadraticStorage& st, double tol) {
    KypReport report = check_dissipative(sys, sr, st, tol);
    if (!report.certificate.is_psd) {
        throw DefinitenessError("lure_factor: KYP matrix is not positive semidefinite",
                                report.certificate.min_eigenvalue);
    }
    FactorCertificate fc = rank_revealing_factor(report.kyp_matrix, tol);
    const Eigen::Index n = sys.n();
    report.lure = LurePair{fc.factor.leftCols(n), fc.factor.rightCols(sys.m()), fc.rank};
    return report;
}

double dissipation_rate(const LurePair& lp, const Vector& x, const Vector& u) {
    if (x.size() != lp.K.cols() || u.size() != lp.L.cols()) {
        throw DimensionError("dissipation_rate: dimension mismatch");
    }
    if (lp.q == 0) return 0.0;
    return (lp.K * x + lp.L * u).squaredNorm();
}

double pointwise_kyp_residual(const StateSpaceSystem& sys, const SupplyRate& sr,
                              const QuadraticStorage& st, const Vector& x, const Vector& u) {
    check_shapes(sys, sr, st);
    if (x.size() != sys.n() || u.size() != sys.m()) {
        throw DimensionError("pointwise_kyp_residual: dimension mismatch");
    }
    const Vector xdot = sys.A * x + sys.B * u;
    const Vector y = sys.C * x + sys.D * u;
    const double storage_term = 2.0 * (x.adjoint() * st.P.entries() * xdot)(0).real();
    return storage_term + supply_eval(sr, y, u);
}

}  // namespace dissip
