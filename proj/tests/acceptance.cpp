// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses independent oracles.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "dissip/json_io.hpp"

using namespace dissip;

namespace {

std::mt19937 rng(20240823);

Vector random_vector(int n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(dist(rng), dist(rng));
    return v;
}

Matrix random_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j) m.col(j) = random_vector(rows);
    return m;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

StateSpaceSystem lqr_system() {
    return StateSpaceSystem(scalar(-1.0), scalar(1.0), scalar(1.0), scalar(0.0));
}

SupplyRate lqr_supply() {
    return SupplyRate(HermitianMatrix::Identity(1), scalar(0.0), HermitianMatrix::Identity(1));
}

struct CorpusEntry {
    StateSpaceSystem sys;
    SupplyRate sr;
    QuadraticStorage st;

    CorpusEntry(StateSpaceSystem s, SupplyRate r, QuadraticStorage p)
        : sys(std::move(s)), sr(std::move(r)), st(std::move(p)) {}
};

/// Random dissipative instance built backwards from Lur'e data: pick (K, L)
/// and P, then solve for the supply making the KYP matrix equal [K L]*[K L].
/// Uses p = n with invertible C so the supply is uniquely determined.
CorpusEntry random_corpus_entry(int n, int m) {
    Matrix a = random_matrix(n, n);
    // Keep the spectral abscissa moderate so T = 2 trajectories stay bounded.
    Eigen::ComplexEigenSolver<Matrix> es(a, false);
    const double abscissa = es.eigenvalues().real().maxCoeff();
    if (abscissa > 0.5) a -= (abscissa - 0.5) * Matrix::Identity(n, n);
    const Matrix b = random_matrix(n, m);
    const Matrix c = random_matrix(n, n) + 3.0 * Matrix::Identity(n, n);
    const Matrix d = random_matrix(n, m);

    std::uniform_int_distribution<int> rank_dist(1, n + m);
    const Matrix kl = random_matrix(rank_dist(rng), n + m);
    const Matrix gp = random_matrix(n, n);
    const Matrix p = gp + gp.adjoint();

    Matrix phi = Matrix::Zero(n + m, n + m);
    phi.topLeftCorner(n, n) = a.adjoint() * p + p * a;
    phi.topRightCorner(n, m) = p * b;
    phi.bottomLeftCorner(m, n) = b.adjoint() * p;
    Matrix gamma = Matrix::Zero(n + m, n + m);
    gamma.topLeftCorner(n, n) = c;
    gamma.topRightCorner(n, m) = d;
    gamma.bottomRightCorner(m, m) = Matrix::Identity(m, m);
    const Matrix target = kl.adjoint() * kl - phi;
    const Eigen::FullPivLU<Matrix> gamma_adj_lu(gamma.adjoint());
    Matrix xi = gamma_adj_lu.solve(Matrix(gamma_adj_lu.solve(target).adjoint())).adjoint();
    xi = 0.5 * (xi + xi.adjoint().eval());

    return CorpusEntry(
        StateSpaceSystem(a, b, c, d),
        SupplyRate(HermitianMatrix(Matrix(xi.topLeftCorner(n, n))), xi.topRightCorner(n, m),
                   HermitianMatrix(Matrix(xi.bottomRightCorner(m, m)))),
        QuadraticStorage(HermitianMatrix(p)));
}

Vector bump_profile(int n) {
    Vector x(n);
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        const double z = 2.0 * (i + 1) * h - 1.0;
        x(i) = std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
    }
    return x;
}

int failures = 0;

void report(int criterion, bool pass, const char* label) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, label);
    if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);
    const double k = std::sqrt(2.0) - 1.0;
    pass &= std::abs(vf.P_val.entries()(0, 0).real() - k) <= 1e-8;

    const auto lure = lure_factor(sys, sr, QuadraticStorage{vf.P_val});
    pass &= lure.lure.has_value() && lure.lure->q == 1;
    if (pass) {
        const Complex ratio = lure.lure->K(0, 0) / lure.lure->L(0, 0);
        pass &= std::abs(ratio - Complex(k, 0.0)) <= 1e-8;
    }
    const Matrix f = optimal_feedback(sys, sr, vf);
    pass &= std::abs(f(0, 0) - Complex(-k, 0.0)) <= 1e-8;
    pass &= seconds_since(t0) < 1.0;
    report(1, pass, "scalar LQR value function, Lur'e row, optimal feedback");
}

std::vector<CorpusEntry> corpus;

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::uniform_int_distribution<int> n_dist(1, 3);
    std::uniform_int_distribution<int> m_dist(1, 3);
    std::uniform_real_distribution<double> freq(0.5, 4.0);
    corpus.clear();
    for (int i = 0; i < 20; ++i) {
        corpus.push_back(random_corpus_entry(n_dist(rng), m_dist(rng)));
    }
    for (const auto& entry : corpus) {
        const auto rep = lure_factor(entry.sys, entry.sr, entry.st, 1e-7);
        if (!rep.certificate.is_psd || !rep.lure) {
            pass = false;
            break;
        }
        const InputSignal u =
            InputSignal::sine(random_vector(static_cast<int>(entry.sys.m())), freq(rng));
        const auto traj = simulate(entry.sys, random_vector(static_cast<int>(entry.sys.n())),
                                   u, 2.0, 1e-3);
        const auto bal = dissipation_balance(traj, entry.st, entry.sr, rep.lure);
        const double scale = 1.0 + std::abs(bal.delta_storage) +
                             std::abs(bal.supply_integral) + std::abs(*bal.rate_integral);
        pass &= std::abs(bal.residual) <= 1e-5 * scale;
        pass &= bal.lhs >= -1e-5 * scale;
    }
    pass &= seconds_since(t0) < 30.0;
    report(2, pass, "corpus balance identity and dissipation inequality");
}

void criterion_3() {
    bool pass = !corpus.empty();
    for (const auto& entry : corpus) {
        const auto rep = lure_factor(entry.sys, entry.sr, entry.st, 1e-7);
        if (!rep.lure) {
            pass = false;
            break;
        }
        Matrix kl(rep.lure->q, rep.kyp_matrix.dim());
        kl << rep.lure->K, rep.lure->L;
        const double residual = (rep.kyp_matrix.entries() - kl.adjoint() * kl).norm();
        pass &= residual <= 1e-10 * (1.0 + rep.kyp_matrix.frobenius_norm());

        Eigen::SelfAdjointEigenSolver<Matrix> es(rep.kyp_matrix.entries());
        const double cutoff = 1e-7 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        pass &= rep.lure->q == (es.eigenvalues().array() > cutoff).count();
    }
    report(3, pass, "Lur'e reconstruction and eigenvalue-count rank over the corpus");
}

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (int n : {4, 16, 64}) {
        TransportConfig cfg;
        cfg.n = n;
        cfg.alpha = Complex(0.3, 0.4);
        const auto sys = transport_system(cfg);
        const auto pair = transport_upwind_dissipative_pair(cfg);
        for (int trial = 0; trial < 100; ++trial) {
            const Vector x = random_vector(n);
            const Vector u = random_vector(1);
            double telescoped = std::norm(x(0) - u(0));
            for (int i = 1; i < n; ++i) telescoped += std::norm(x(i) - x(i - 1));
            const double residual =
                pointwise_kyp_residual(sys, pair.supply, pair.storage, x, u);
            pass &= std::abs(residual - telescoped) <= 1e-12 * (1.0 + telescoped) * n;
        }
        pass &= check_dissipative(sys, pair.supply, pair.storage)
                    .certificate.min_eigenvalue >= -1e-10;
    }
    pass &= seconds_since(t0) < 5.0;
    report(4, pass, "upwind sum-of-squares identity and KYP certificate");
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    TransportConfig cfg;
    cfg.alpha = Complex(0.3, 0.4);
    cfg.q = 1.0;
    cfg.s = -cfg.alpha;
    cfg.r = std::norm(cfg.alpha) - 1.0;

    auto balance_at = [&](int n) {
        TransportConfig c = cfg;
        c.n = n;
        // Sine that does not vanish at T = 1, so the endpoint quadrature
        // term h*(s_N - s_0)/2 carries the first-order error.
        std::vector<Complex> u(static_cast<std::size_t>(n) + 1);
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = std::sin(2.5 * M_PI * static_cast<double>(k) * c.h());
        }
        const auto traj = transport_exact_shift(c, bump_profile(n), u, 1.0);
        Matrix qm(1, 1), sm(1, 1), rm(1, 1);
        qm << c.q;
        sm << c.s;
        rm << c.r;
        return dissipation_balance(traj, transport_storage_continuum(c),
                                   SupplyRate(HermitianMatrix(qm), sm, HermitianMatrix(rm)))
            .lhs;
    };

    const double coarse = std::abs(balance_at(64));
    const double fine = std::abs(balance_at(128));
    const double ratio = coarse / fine;
    bool pass = coarse <= 10.0 / 64.0 && fine <= 10.0 / 128.0;
    pass &= ratio >= 1.5 && ratio <= 2.5;
    pass &= seconds_since(t0) < 5.0;
    report(5, pass, "transport continuum oracle converges at first order");
}

void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (int n : {25, 50, 100}) {
        HeatConfig cfg;
        cfg.n = n;
        const auto sys = heat_system(cfg);
        const auto st = heat_storage(cfg);
        const double w_norm = st.P.frobenius_norm();
        const auto rep = lure_factor(sys, heat_supply(cfg), st);
        pass &= rep.kyp_matrix.frobenius_norm() <= 1e-8 * (1.0 + w_norm);
        pass &= rep.lure && rep.lure->q == 0;

        Vector x0(n);
        const double h = cfg.h();
        for (int i = 0; i < n; ++i) x0(i) = std::sin(M_PI * (i + 1) * h);
        const double dt = 0.125 * h * h;  // trapezoid supply error ~dt^2
        const auto traj = simulate(sys, x0, InputSignal::zero(), 0.1, dt);
        const auto bal = dissipation_balance(traj, st, heat_supply(cfg));
        const double scale =
            std::abs(bal.delta_storage) + std::abs(bal.supply_integral) + 1e-12;
        pass &= std::abs(bal.lhs) <= 1e-6 * scale;
    }
    pass &= seconds_since(t0) < 60.0;
    report(6, pass, "heat Gramian KYP exactness and decay balance");
}

void criterion_7() {
    const auto table = gramian_refinement_study({25, 50, 100, 200});
    bool pass = table.size() == 4;
    for (std::size_t i = 1; pass && i < table.size(); ++i) {
        pass &= table[i].gram_norm > table[i - 1].gram_norm;
    }
    if (pass) {
        pass &= std::abs(table[3].form_value - table[2].form_value) <
                std::abs(table[2].form_value - table[1].form_value);
    }
    report(7, pass, "Gramian norm grows under refinement; form values contract");
}

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);

    bool pass = storage_dominance_check(sys, sr, QuadraticStorage{HermitianMatrix::Zero(1)},
                                        vf)
                    .is_psd;
    pass &= storage_dominance_check(sys, sr, QuadraticStorage{HermitianMatrix(scalar(0.2))},
                                    vf)
                .is_psd;

    for (int trial = 0; trial < 100; ++trial) {
        const Vector a = random_vector(1);
        const Vector b = random_vector(1);
        const double lhs = vf.eval(a + b) + vf.eval(a - b);
        const double rhs = 2.0 * vf.eval(a) + 2.0 * vf.eval(b);
        pass &= std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs));
    }

    const auto oracle =
        value_oracle(sys, sr, vf, Vector::Constant(1, 1.0), 10.0, {64, 41, 2.0});
    const double riccati = std::sqrt(2.0) - 1.0;
    pass &= std::abs(oracle.estimate - riccati) <= 0.02 * riccati;

    pass &= value_decay_check(sys, sr, vf, Vector::Constant(1, 1.0), 20.0, 1e-3) <= 1e-10;
    pass &= seconds_since(t0) < 60.0;
    report(8, pass, "value dominance, parallelogram identity, oracle, decay");
}

void criterion_9() {
    bool pass = true;
    for (int n : {10, 40, 160}) {
        const MollifierKernel kernel = mollifier_kernel(n);
        double integral = 0.0;
        for (int j = 1; j < kernel.times.size(); ++j) {
            integral += 0.5 * (kernel.times(j) - kernel.times(j - 1)) *
                        (kernel.values(j) + kernel.values(j - 1));
        }
        pass &= std::abs(integral - 1.0) <= 1e-10;
        pass &= kernel.values.minCoeff() >= 0.0;
        pass &= kernel.values(0) == 0.0 && kernel.values(kernel.values.size() - 1) == 0.0;
        pass &= kernel.times(0) >= -1.0 / n - 1e-15 && kernel.times(kernel.times.size() - 1) <= 0.0;
    }

    const StateSpaceSystem sys(scalar(-1.0), scalar(1.0), scalar(1.0), scalar(0.0));
    const SupplyRate sr = make_scattering_supply(1, 1);
    const QuadraticStorage st = internal_passivity_storage(1);
    const double dt = 1e-3;
    const InputSignal step = InputSignal::sampled(
        {0.0, 1.0, 1.0 + dt, 3.0},
        {Vector::Zero(1), Vector::Zero(1), Vector::Constant(1, 1.0),
         Vector::Constant(1, 1.0)});
    const auto traj = simulate(sys, Vector::Constant(1, 1.0), step, 3.0, dt);
    const std::size_t common =
        traj.size() - static_cast<std::size_t>(std::floor(0.1 / dt)) - 1;
    const double reference = dissipation_balance(traj.segment(0, common), st, sr).lhs;
    double prev_err = std::numeric_limits<double>::infinity();
    for (int n : {10, 40, 160}) {
        const auto smooth = mollify(traj, sys, n);
        const auto clipped =
            smooth.segment(0, std::min<std::size_t>(common, smooth.size() - 1));
        const double err = std::abs(dissipation_balance(clipped, st, sr).lhs - reference);
        pass &= err < prev_err;
        prev_err = err;
    }
    report(9, pass, "mollifier kernel properties and monotone balance convergence");
}

void criterion_10() {
    bool pass = false;
    try {
        value_function(StateSpaceSystem(scalar(1.0), scalar(0.0), scalar(1.0), scalar(0.0)),
                       lqr_supply());
    } catch (const StabilizabilityError& e) {
        pass = e.offending_eigenvalues.size() == 1 &&
               std::abs(e.offending_eigenvalues[0] - Complex(1.0, 0.0)) < 1e-9;
    }

    const StateSpaceSystem unstable(scalar(1.0), scalar(1.0), scalar(1.0), scalar(0.0));
    const auto vf = value_function(unstable, lqr_supply());
    pass &= std::abs(vf.P_val.entries()(0, 0).real() - (1.0 + std::sqrt(2.0))) <= 1e-8;
    report(10, pass, "stabilizability gate and unstable-plant Riccati value");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
