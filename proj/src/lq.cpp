#include "dissip/lq.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dissip {

double ValueFunction::eval(const Vector& x0) const {
    if (x0.size() != P_val.dim()) throw DimensionError("value function: dimension mismatch");
    return (x0.adjoint() * P_val.entries() * x0)(0).real();
}

namespace {

struct RiccatiData {
    HermitianMatrix q;  // C*QC
    HermitianMatrix r;  // D*QD + D*S + S*D + R (effective input weight)
    Matrix s;           // C*QD + C*S
};

RiccatiData riccati_weights(const StateSpaceSystem& sys, const SupplyRate& sr) {
    const Matrix cq = sys.C.adjoint() * sr.Q.entries();
    Matrix q = cq * sys.C;
    q = 0.5 * (q + q.adjoint().eval());
    const Matrix ds = sys.D.adjoint() * sr.S;
    Matrix r = sys.D.adjoint() * sr.Q.entries() * sys.D + ds + ds.adjoint() + sr.R.entries();
    r = 0.5 * (r + r.adjoint().eval());
    return {HermitianMatrix(q), HermitianMatrix(r), cq * sys.D + sys.C.adjoint() * sr.S};
}

double spectral_abscissa(const Matrix& m) {
    if (m.rows() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    return es.eigenvalues().real().maxCoeff();
}

}  // namespace

ValueFunction value_function(const StateSpaceSystem& sys, const SupplyRate& sr, double tol) {
    const auto nonneg = supply_is_nonneg(sr, tol);
    if (!nonneg.is_psd) {
        throw PreconditionError("value_function: supply rate is not nonnegative (min eigenvalue " +
                                std::to_string(nonneg.min_eigenvalue) + ")");
    }
    const RiccatiData w = riccati_weights(sys, sr);
    if (sys.m() > 0) {
        const auto r_cert = check_psd(w.r, 0.0);
        if (r_cert.min_eigenvalue <= 1e-9) {
            throw RestrictionError(
                "value_function: effective input weight D*QD + D*S + S*D + R must be positive "
                "definite; singular weights are unsupported");
        }
    }
    HermitianMatrix p = solve_care(sys.A, sys.B, w.q, w.r, w.s);

    const Matrix g = p.entries() * sys.B + w.s;
    const Matrix r_inv = sys.m() > 0
                             ? Matrix(w.r.entries().llt().solve(Matrix::Identity(sys.m(), sys.m())))
                             : Matrix(0, 0);
    const double residual =
        (sys.A.adjoint() * p.entries() + p.entries() * sys.A + w.q.entries() -
         g * r_inv * g.adjoint())
            .norm();
    const double abscissa = spectral_abscissa(sys.A - sys.B * (r_inv * g.adjoint()));
    return {std::move(p), residual, abscissa};
}

Matrix optimal_feedback(const StateSpaceSystem& sys, const SupplyRate& sr,
                        const ValueFunction& vf, double tol) {
    const KypReport report = lure_factor(sys, sr, QuadraticStorage(vf.P_val), tol);
    const LurePair& lp = *report.lure;
    if (lp.q != sys.m()) {
        throw RestrictionError("optimal_feedback: dissipation rate has rank " +
                               std::to_string(lp.q) + ", expected m = " +
                               std::to_string(sys.m()) +
                               "; an optimal control may not exist");
    }
    Eigen::JacobiSVD<Matrix> svd(lp.L);
    if (sys.m() > 0) {
        const double tol_used = tol * std::max(1.0, svd.singularValues()(0));
        if (svd.singularValues().minCoeff() <= tol_used) {
            throw RestrictionError(
                "optimal_feedback: L is singular; an optimal control may not exist");
        }
    }
    Matrix f = -lp.L.fullPivLu().solve(lp.K);
    const double abscissa = spectral_abscissa(sys.A + sys.B * f);
    if (abscissa >= 0) {
        throw ConvergenceError("optimal_feedback: closed loop is not Hurwitz", {abscissa});
    }
    return f;
}

namespace {

/// Finite-horizon cost of a piecewise-constant control, integrated by RK4
/// with a fixed number of substeps per segment and per-segment trapezoid
/// quadrature of the supply.
class SegmentCost {
public:
    SegmentCost(const StateSpaceSystem& sys, const SupplyRate& sr, const ValueFunction& vf,
                Vector x0, double horizon, int segments)
        : sys_(sys), sr_(sr), vf_(vf), x0_(std::move(x0)),
          seg_len_(horizon / segments), segments_(segments) {}

    /// controls: m x segments matrix of segment values.
    std::pair<double, double> cost(const Matrix& controls) const {
        Vector x = x0_;
        double integral = 0.0;
        const int sub = 16;
        const double dt = seg_len_ / sub;
        for (int seg = 0; seg < segments_; ++seg) {
            const Vector u = controls.col(seg);
            const Vector bu = sys_.B * u;
            auto deriv = [&](const Vector& z) -> Vector { return sys_.A * z + bu; };
            for (int i = 0; i < sub; ++i) {
                const double s0 = supply_eval(sr_, sys_.C * x + sys_.D * u, u);
                const Vector k1 = deriv(x);
                const Vector k2 = deriv(x + 0.5 * dt * k1);
                const Vector k3 = deriv(x + 0.5 * dt * k2);
                const Vector k4 = deriv(x + dt * k3);
                x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                const double s1 = supply_eval(sr_, sys_.C * x + sys_.D * u, u);
                integral += 0.5 * dt * (s0 + s1);
            }
        }
        const double tail = vf_.eval(x);
        return {integral + tail, integral};
    }

    const Vector& x0() const { return x0_; }
    double segment_length() const { return seg_len_; }

private:
    const StateSpaceSystem& sys_;
    const SupplyRate& sr_;
    const ValueFunction& vf_;
    Vector x0_;
    double seg_len_;
    int segments_;
};

}  // namespace

OracleEstimate value_oracle(const StateSpaceSystem& sys, const SupplyRate& sr,
                            const ValueFunction& vf, const Vector& x0, double horizon,
                            const OracleGrid& grid) {
    if (sys.m() < 1) throw PreconditionError("value_oracle: needs at least one input");
    if (grid.segments < 1 || grid.amplitude_levels < 1 || !(grid.amplitude_bound > 0)) {
        throw PreconditionError("value_oracle: grid sizes must be positive");
    }
    const Eigen::Index m = sys.m();
    const int levels = grid.amplitude_levels;
    const int coords = grid.segments * static_cast<int>(m);

    std::vector<double> level_values(levels);
    for (int i = 0; i < levels; ++i) {
        level_values[i] = levels == 1 ? 0.0
                                      : -grid.amplitude_bound +
                                            2.0 * grid.amplitude_bound * i / (levels - 1);
    }

    // Real-valued control grid; complex controls are out of the search class.
    SegmentCost evaluator(sys, sr, vf, x0, horizon, grid.segments);

    if (static_cast<double>(coords) * levels > 1e8) {
        throw SizeError("value_oracle: search space overflow");
    }
    double combos = 1.0;
    for (int c = 0; c < coords && combos <= 1e6; ++c) combos *= levels;
    const bool exhaustive = combos <= 1e6;

    Matrix controls = Matrix::Zero(m, grid.segments);
    std::ostringstream describe;
    describe << "piecewise-constant, " << grid.segments << " segments, " << levels
             << " levels per component in [-" << grid.amplitude_bound << ", "
             << grid.amplitude_bound << "], ";

    double best_cost, best_no_tail;
    if (exhaustive) {
        describe << "exhaustive search";
        std::vector<int> index(coords, 0);
        best_cost = std::numeric_limits<double>::infinity();
        best_no_tail = 0.0;
        while (true) {
            for (int c = 0; c < coords; ++c) {
                controls(c % m, c / m) = level_values[index[c]];
            }
            const auto [cost, no_tail] = evaluator.cost(controls);
            if (cost < best_cost) {
                best_cost = cost;
                best_no_tail = no_tail;
            }
            int c = 0;
            while (c < coords && ++index[c] == levels) index[c++] = 0;
            if (c == coords) break;
        }
    } else {
        describe << "coordinate descent from the Riccati feedback";
        // Initialize from the closed loop u = Fx sampled at segment midpoints,
        // projected onto the level grid.
        Matrix f;
        try {
            f = optimal_feedback(sys, sr, vf);
        } catch (const AnalysisError&) {
            f = Matrix::Zero(m, sys.n());
        }
        const double dt = horizon / (grid.segments * 16);
        Trajectory closed = simulate(sys, x0, InputSignal::feedback(f, InputSignal::zero()),
                                     horizon, dt);
        auto nearest_level = [&](double v) {
            double best = level_values[0];
            for (double lv : level_values) {
                if (std::abs(lv - v) < std::abs(best - v)) best = lv;
            }
            return best;
        };
        for (int seg = 0; seg < grid.segments; ++seg) {
            const std::size_t mid = static_cast<std::size_t>(seg * 16 + 8);
            for (Eigen::Index i = 0; i < m; ++i) {
                controls(i, seg) = nearest_level(closed.inputs[mid](i).real());
            }
        }
        auto [cost, no_tail] = evaluator.cost(controls);
        best_cost = cost;
        best_no_tail = no_tail;
        for (int sweep = 0; sweep < 20; ++sweep) {
            bool improved = false;
            for (int seg = 0; seg < grid.segments; ++seg) {
                for (Eigen::Index i = 0; i < m; ++i) {
                    double best_level = controls(i, seg).real();
                    for (double lv : level_values) {
                        controls(i, seg) = lv;
                        const auto [c, nt] = evaluator.cost(controls);
                        if (c < best_cost - 1e-14) {
                            best_cost = c;
                            best_no_tail = nt;
                            best_level = lv;
                            improved = true;
                        }
                    }
                    controls(i, seg) = best_level;
                }
            }
            if (!improved) break;
        }
    }
    return {x0, horizon, best_cost, best_no_tail, describe.str()};
}

PsdCertificate storage_dominance_check(const StateSpaceSystem& sys, const SupplyRate& sr,
                                       const QuadraticStorage& st, const ValueFunction& vf,
                                       double tol) {
    const auto storage_psd = check_psd(st.P, tol);
    if (!storage_psd.is_psd) {
        throw PreconditionError("storage_dominance_check: storage is not nonnegative");
    }
    const auto report = check_dissipative(sys, sr, st, tol);
    if (!report.certificate.is_psd) {
        throw PreconditionError("storage_dominance_check: (sys, sr, st) is not dissipative");
    }
    return check_psd(HermitianMatrix(Matrix(vf.P_val.entries() - st.P.entries())), tol);
}

double value_decay_check(const StateSpaceSystem& sys, const SupplyRate& sr,
                         const ValueFunction& vf, const Vector& x0, double total_time,
                         double dt) {
    const Matrix f = optimal_feedback(sys, sr, vf);
    const Trajectory traj =
        simulate(sys, x0, InputSignal::feedback(f, InputSignal::zero()), total_time, dt);
    return vf.eval(traj.states.back());
}

}  // namespace dissip
