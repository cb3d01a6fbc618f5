#pragma once

#include <optional>

#include "dissip/system.hpp"

namespace dissip {

/// Factor pair (K, L) of the Lur'e equations: KYP matrix = [K L]* [K L].
/// K has q rows and n columns, L has q rows and m columns.
struct LurePair {
    Matrix K;
    Matrix L;
    Eigen::Index q;
};

struct KypReport {
    HermitianMatrix kyp_matrix;
    PsdCertificate certificate;
    std::optional<LurePair> lure;
};

/// Assemble the (n+m) x (n+m) block matrix
///   [[A*P + PA + C*QC,        PB + C*QD + C*S],
///    [B*P + D*QC + S*C,  D*QD + D*S + S*D + R]].
/// With m = 0 this degenerates to the n x n upper-left block.
HermitianMatrix kyp_matrix(const StateSpaceSystem& sys, const SupplyRate& sr,
                           const QuadraticStorage& st);

/// Certify the matrix inequality: PSD of the KYP matrix at the given storage.
KypReport check_dissipative(const StateSpaceSystem& sys, const SupplyRate& sr,
                            const QuadraticStorage& st, double tol = kDefaultTol);

/// Rank-revealing factorization of the KYP matrix, split into (K, L).
KypReport lure_factor(const StateSpaceSystem& sys, const SupplyRate& sr,
                      const QuadraticStorage& st, double tol = kDefaultTol);

/// Pointwise dissipation rate ||K x + L u||^2.
double dissipation_rate(const LurePair& lp, const Vector& x, const Vector& u);

/// 2 Re(x* P (Ax + Bu)) + s(Cx + Du, u); equals [x; u]* KYP [x; u].
double pointwise_kyp_residual(const StateSpaceSystem& sys, const SupplyRate& sr,
                              const QuadraticStorage& st, const Vector& x, const Vector& u);

}  // namespace dissip
