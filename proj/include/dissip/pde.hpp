#pragma once

#include <vector>

#include "dissip/trajectory.hpp"

namespace dissip {

/// Upwind semi-discretization of the boundary-controlled transport equation
/// on [0, 1] with rightward flow; nodes at i*h, i = 1..n, h = 1/n. The inflow
/// value is the input, the output is alpha*u + x(t, 1).
struct TransportConfig {
    int n = 64;                 // grid size, h = 1/n
    Complex alpha{0.0, 0.0};    // output mixing parameter
    double q = 1.0;             // supply weight on |y|^2
    Complex s{0.0, 0.0};        // supply coupling
    double r = 0.0;             // supply weight on |u|^2

    double h() const { return 1.0 / n; }
};

/// Second-difference Dirichlet Laplacian on (0, 1) with n interior nodes,
/// h = 1/(n+1); no input, two-point outward Neumann trace as output.
struct HeatConfig {
    int n = 50;
    double h() const { return 1.0 / (n + 1); }
};

StateSpaceSystem transport_system(const TransportConfig& cfg);

/// Exact CFL-1 shift propagation (method of characteristics on the grid);
/// T must be a multiple of h, u sampled on the same grid.
Trajectory transport_exact_shift(const TransportConfig& cfg, const Vector& x0_samples,
                                 const std::vector<Complex>& u_samples, double total_time);

/// The 2x2 matrix whose positive semidefiniteness makes the continuum L^2
/// storage valid for the supply (q, s, r):
///   M = [[q - 1, s + alpha], [conj(s + alpha), r + 1 - |alpha|^2]].
HermitianMatrix transport_M(const TransportConfig& cfg);

/// Discrete L^2 storage P = h*I (Riemann-sum weight of the continuum storage).
QuadraticStorage transport_storage_continuum(const TransportConfig& cfg);

/// Internal-dissipativity pair for the upwind discretization: P = -h*I with
/// supply s(y, u) = |u|^2 - |y - alpha u|^2. The KYP quadratic form is then
/// exactly the numerical-diffusion sum sum_i |x_i - x_{i-1}|^2 (x_0 := u).
struct UpwindDissipativePair {
    SupplyRate supply;
    QuadraticStorage storage;
    Eigen::Index expected_lure_rank;  // n first-difference functionals
};
UpwindDissipativePair transport_upwind_dissipative_pair(const TransportConfig& cfg);

StateSpaceSystem heat_system(const HeatConfig& cfg);

/// Supply s(y) = -h*||y||^2 on the two-point Neumann trace.
SupplyRate heat_supply(const HeatConfig& cfg);

/// Storage P = -W with W the h-weighted observability Gramian
/// A*W + WA + h*C*C = 0; the n x n KYP matrix then vanishes.
QuadraticStorage heat_storage(const HeatConfig& cfg);

struct GramianStudyRow {
    int n;
    double gram_norm;   // ||W_n / h^2||_2, the L^2_h operator norm of the form
    double form_value;  // S_n in the same geometry at the normalized sin(pi*xi) sample
};

/// Mesh-refinement study of the Gramian storage: operator norm per grid and
/// the form value on a fixed normalized smooth state.
std::vector<GramianStudyRow> gramian_refinement_study(const std::vector<int>& ns);

}  // namespace dissip
