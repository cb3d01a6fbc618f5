#include "dissip/pde.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace dissip {

namespace {

void require_grid(int n) {
    if (n < 2) throw PreconditionError("grid size must be at least 2");
}

}  // namespace

StateSpaceSystem transport_system(const TransportConfig& cfg) {
    require_grid(cfg.n);
    const int n = cfg.n;
    const double inv_h = 1.0 / cfg.h();
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = -inv_h;
        if (i > 0) a(i, i - 1) = inv_h;
    }
    Matrix b = Matrix::Zero(n, 1);
    b(0, 0) = inv_h;  // inflow coupling x_0 = u
    Matrix c = Matrix::Zero(1, n);
    c(0, n - 1) = 1.0;
    Matrix d(1, 1);
    d(0, 0) = cfg.alpha;
    return StateSpaceSystem(std::move(a), std::move(b), std::move(c), std::move(d));
}

Trajectory transport_exact_shift(const TransportConfig& cfg, const Vector& x0_samples,
                                 const std::vector<Complex>& u_samples, double total_time) {
    require_grid(cfg.n);
    const int n = cfg.n;
    const double h = cfg.h();
    if (x0_samples.size() != n) {
        throw DimensionError("transport_exact_shift: x0 must have n samples");
    }
    const double steps_real = total_time / h;
    const auto steps = static_cast<std::size_t>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 || steps == 0) {
        throw AlignmentError("transport_exact_shift: T must be a positive multiple of h");
    }
    if (u_samples.size() != steps + 1) {
        throw DimensionError("transport_exact_shift: u must be sampled on the time grid");
    }

    Trajectory traj;
    traj.dt = h;
    traj.scheme = Scheme::ExactTransportShift;
    Vector x = x0_samples;
    for (std::size_t k = 0; k <= steps; ++k) {
        const Complex u = u_samples[k];
        traj.times.push_back(static_cast<double>(k) * h);
        traj.states.push_back(x);
        traj.inputs.push_back(Vector::Constant(1, u));
        traj.outputs.push_back(Vector::Constant(1, cfg.alpha * u + x(n - 1)));
        if (k == steps) break;
        // CFL-1 shift: every sample moves one cell to the right, the inflow
        // cell is filled from the boundary input.
        for (int i = n - 1; i >= 1; --i) x(i) = x(i - 1);
        x(0) = u;
    }
    return traj;
}

HermitianMatrix transport_M(const TransportConfig& cfg) {
    Matrix m(2, 2);
    const Complex coupling = cfg.s + cfg.alpha;
    m(0, 0) = cfg.q - 1.0;
    m(0, 1) = coupling;
    m(1, 0) = std::conj(coupling);
    m(1, 1) = cfg.r + 1.0 - std::norm(cfg.alpha);
    return HermitianMatrix(m);
}

QuadraticStorage transport_storage_continuum(const TransportConfig& cfg) {
    require_grid(cfg.n);
    return QuadraticStorage(HermitianMatrix(Matrix(cfg.h() * Matrix::Identity(cfg.n, cfg.n))));
}

UpwindDissipativePair transport_upwind_dissipative_pair(const TransportConfig& cfg) {
    require_grid(cfg.n);
    // s(y, u) = |u|^2 - |y - alpha u|^2, i.e. q = -1, s = +alpha, r = 1 - |alpha|^2.
    Matrix q(1, 1), s(1, 1), r(1, 1);
    q(0, 0) = -1.0;
    s(0, 0) = cfg.alpha;
    r(0, 0) = 1.0 - std::norm(cfg.alpha);
    SupplyRate supply(HermitianMatrix(q), std::move(s), HermitianMatrix(r));
    QuadraticStorage storage(
        HermitianMatrix(Matrix(-cfg.h() * Matrix::Identity(cfg.n, cfg.n))));
    return {std::move(supply), std::move(storage), cfg.n};
}

StateSpaceSystem heat_system(const HeatConfig& cfg) {
    require_grid(cfg.n);
    const int n = cfg.n;
    const double inv_h2 = 1.0 / (cfg.h() * cfg.h());
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = -2.0 * inv_h2;
        if (i > 0) a(i, i - 1) = inv_h2;
        if (i + 1 < n) a(i, i + 1) = inv_h2;
    }
    // Outward one-sided Neumann traces against the zero boundary values.
    Matrix c = Matrix::Zero(2, n);
    c(0, 0) = -1.0 / cfg.h();
    c(1, n - 1) = -1.0 / cfg.h();
    return StateSpaceSystem(std::move(a), Matrix::Zero(n, 0), std::move(c), Matrix::Zero(2, 0));
}

SupplyRate heat_supply(const HeatConfig& cfg) {
    require_grid(cfg.n);
    return SupplyRate(HermitianMatrix(Matrix(-cfg.h() * Matrix::Identity(2, 2))),
                      Matrix::Zero(2, 0), HermitianMatrix::Zero(0));
}

QuadraticStorage heat_storage(const HeatConfig& cfg) {
    const StateSpaceSystem sys = heat_system(cfg);
    // h-weighted output pairing matches the supply s(y) = -h*||y||^2.
    Matrix rhs = cfg.h() * (sys.C.adjoint() * sys.C);
    rhs = 0.5 * (rhs + rhs.adjoint().eval());
    const HermitianMatrix w = solve_lyapunov(sys.A, HermitianMatrix(rhs));
    return QuadraticStorage(HermitianMatrix(Matrix(-w.entries())));
}

std::vector<GramianStudyRow> gramian_refinement_study(const std::vector<int>& ns) {
    for (std::size_t i = 1; i < ns.size(); ++i) {
        if (ns[i] <= ns[i - 1]) {
            throw PreconditionError("gramian_refinement_study: grid sizes must increase");
        }
    }
    std::vector<GramianStudyRow> table;
    table.reserve(ns.size());
    for (int n : ns) {
        const HeatConfig cfg{n};
        const QuadraticStorage storage = heat_storage(cfg);
        const double h = cfg.h();
        // Mass-normalized Gramian: the operator of the form in the discrete
        // L^2_h geometry is W/h^2, so its norm tracks the continuum operator
        // sup over L^2-unit states of the time-integrated squared flux.
        const Matrix w = -storage.P.entries() / (h * h);
        Eigen::SelfAdjointEigenSolver<Matrix> es(w);
        if (es.info() != Eigen::Success) throw EigensolverError(n);
        const double gram_norm = es.eigenvalues().cwiseAbs().maxCoeff();

        // Fixed smooth state: sin(pi*xi) sampled and normalized in the
        // h-weighted discrete L^2 norm; form value in the same geometry.
        Vector x_hat(n);
        for (int i = 0; i < n; ++i) x_hat(i) = std::sin(M_PI * (i + 1) * h);
        x_hat /= std::sqrt(h) * x_hat.norm();
        table.push_back({n, gram_norm, storage.eval(x_hat) / h});
    }
    return table;
}

}  // namespace dissip
