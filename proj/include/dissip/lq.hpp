#pragma once

#include <string>

#include "dissip/trajectory.hpp"

namespace dissip {

/// Value function of the infinite-horizon LQ problem, Val(x0) = x0* P_val x0,
/// obtained as the stabilizing Riccati solution.
struct ValueFunction {
    HermitianMatrix P_val;
    double care_residual;
    double closed_loop_spectral_abscissa;

    double eval(const Vector& x0) const;
};

struct OracleGrid {
    int segments = 32;
    int amplitude_levels = 21;
    double amplitude_bound = 2.0;
};

struct OracleEstimate {
    Vector x0;
    double horizon;
    double estimate;          // best finite-horizon cost with quadratic tail
    double estimate_no_tail;  // same control, tail term omitted
    std::string control_class;
};

/// Solve the LQ problem for a nonnegative supply: P_val is the stabilizing
/// solution of the Riccati equation built from the KYP blocks.
ValueFunction value_function(const StateSpaceSystem& sys, const SupplyRate& sr,
                             double tol = kDefaultTol);

/// Optimal static feedback u = Fx from the Lur'e pair at P_val, solving
/// 0 = Kx + Lu as F = -L^{-1} K. Requires q = m with invertible L.
Matrix optimal_feedback(const StateSpaceSystem& sys, const SupplyRate& sr,
                        const ValueFunction& vf, double tol = kDefaultTol);

/// Brute-force upper bound on Val(x0): minimize the finite-horizon cost with
/// quadratic tail over piecewise-constant level-quantized controls.
OracleEstimate value_oracle(const StateSpaceSystem& sys, const SupplyRate& sr,
                            const ValueFunction& vf, const Vector& x0, double horizon,
                            const OracleGrid& grid);

/// Certify that the value function dominates a given nonnegative storage:
/// check_psd(P_val - P). Preconditions: P PSD and (sys, sr, st) dissipative.
PsdCertificate storage_dominance_check(const StateSpaceSystem& sys, const SupplyRate& sr,
                                       const QuadraticStorage& st, const ValueFunction& vf,
                                       double tol = kDefaultTol);

/// Simulate the optimal closed loop from x0 and return Val(x(T)).
double value_decay_check(const StateSpaceSystem& sys, const SupplyRate& sr,
                         const ValueFunction& vf, const Vector& x0, double total_time,
                         double dt);

}  // namespace dissip
