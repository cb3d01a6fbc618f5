#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dissip/lq.hpp"

using namespace dissip;

namespace {

std::mt19937 rng(20240821);

Vector random_vector(int n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(dist(rng), dist(rng));
    return v;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

StateSpaceSystem lqr_system() {
    return StateSpaceSystem(scalar(-1.0), scalar(1.0), scalar(1.0), scalar(0.0));
}

SupplyRate lqr_supply() {
    return SupplyRate(HermitianMatrix::Identity(1), scalar(0.0), HermitianMatrix::Identity(1));
}

}  // namespace

TEST_CASE("value_function worked examples") {
    const auto vf = value_function(lqr_system(), lqr_supply());
    CHECK(vf.P_val.entries()(0, 0).real() ==
          doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-10));
    CHECK(vf.care_residual <= 1e-8 * (1.0 + vf.P_val.frobenius_norm()));
    CHECK(vf.closed_loop_spectral_abscissa == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));

    // Pure input cost with Hurwitz A: doing nothing is optimal.
    Matrix a2(2, 2);
    a2 << -1.0, 0.3, 0.0, -2.0;
    const StateSpaceSystem hurwitz(a2, Matrix::Ones(2, 1), Matrix::Identity(2, 2),
                                   Matrix::Zero(2, 1));
    const SupplyRate input_only(HermitianMatrix::Zero(2), Matrix::Zero(2, 1),
                                HermitianMatrix::Identity(1));
    CHECK(value_function(hurwitz, input_only).P_val.frobenius_norm() < 1e-8);

    const StateSpaceSystem marginal(scalar(0.0), scalar(1.0), scalar(1.0), scalar(0.0));
    CHECK(value_function(marginal, lqr_supply()).P_val.entries()(0, 0).real() ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("value_function rejects unsupported data") {
    // Singular effective input weight is a documented restriction.
    const SupplyRate r_zero(HermitianMatrix::Identity(1), scalar(0.0), HermitianMatrix::Zero(1));
    CHECK_THROWS_AS(value_function(lqr_system(), r_zero), RestrictionError);

    // Sign-indefinite supply is outside the nonnegative-cost setting.
    CHECK_THROWS_AS(value_function(lqr_system(), make_scattering_supply(1, 1)),
                    PreconditionError);

    // Unstabilizable plant.
    const StateSpaceSystem bad(scalar(1.0), scalar(0.0), scalar(1.0), scalar(0.0));
    CHECK_THROWS_AS(value_function(bad, lqr_supply()), StabilizabilityError);
}

TEST_CASE("optimal_feedback worked examples") {
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);
    const Matrix f = optimal_feedback(sys, sr, vf);
    CHECK(f(0, 0).real() == doctest::Approx(-(std::sqrt(2.0) - 1.0)).epsilon(1e-8));
    CHECK(std::abs(f(0, 0).imag()) < 1e-10);

    Matrix a2(2, 2);
    a2 << -1.0, 0.3, 0.0, -2.0;
    const StateSpaceSystem hurwitz(a2, Matrix::Ones(2, 1), Matrix::Identity(2, 2),
                                   Matrix::Zero(2, 1));
    const SupplyRate input_only(HermitianMatrix::Zero(2), Matrix::Zero(2, 1),
                                HermitianMatrix::Identity(1));
    CHECK(optimal_feedback(hurwitz, input_only, value_function(hurwitz, input_only)).norm() <
          1e-8);

    const StateSpaceSystem marginal(scalar(0.0), scalar(1.0), scalar(1.0), scalar(0.0));
    const auto vfm = value_function(marginal, lqr_supply());
    CHECK(optimal_feedback(marginal, lqr_supply(), vfm)(0, 0).real() ==
          doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("value_oracle worked examples") {
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);

    const auto at_zero = value_oracle(sys, sr, vf, Vector::Zero(1), 10.0, {16, 9, 2.0});
    CHECK(at_zero.estimate == doctest::Approx(0.0).epsilon(1e-12));

    const auto at_one =
        value_oracle(sys, sr, vf, Vector::Constant(1, 1.0), 10.0, {64, 41, 2.0});
    const double riccati = vf.eval(Vector::Constant(1, 1.0));
    CHECK(at_one.estimate >= riccati - 1e-6);
    CHECK(at_one.estimate <= riccati * 1.02);

    Matrix a2(2, 2);
    a2 << -1.0, 0.3, 0.0, -2.0;
    const StateSpaceSystem hurwitz(a2, Matrix::Ones(2, 1), Matrix::Identity(2, 2),
                                   Matrix::Zero(2, 1));
    const SupplyRate input_only(HermitianMatrix::Zero(2), Matrix::Zero(2, 1),
                                HermitianMatrix::Identity(1));
    const auto lazy = value_oracle(hurwitz, input_only, value_function(hurwitz, input_only),
                                   random_vector(2), 5.0, {8, 9, 1.0});
    CHECK(lazy.estimate == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("storage_dominance_check worked examples") {
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);

    const auto self = storage_dominance_check(sys, sr, QuadraticStorage{vf.P_val}, vf);
    CHECK(self.is_psd);
    CHECK(std::abs(self.min_eigenvalue) <= self.tolerance_used);

    const auto zero = storage_dominance_check(sys, sr, QuadraticStorage{HermitianMatrix::Zero(1)},
                                              vf);
    CHECK(zero.is_psd);

    const QuadraticStorage small{HermitianMatrix(scalar(0.2))};
    REQUIRE(check_dissipative(sys, sr, small).certificate.is_psd);
    const auto dom = storage_dominance_check(sys, sr, small, vf);
    CHECK(dom.is_psd);
    CHECK(dom.min_eigenvalue == doctest::Approx(std::sqrt(2.0) - 1.2).epsilon(1e-8));

    // Negative storages violate the nonnegativity precondition.
    CHECK_THROWS_AS(storage_dominance_check(sys, sr,
                                            QuadraticStorage{HermitianMatrix(scalar(-0.1))},
                                            vf),
                    PreconditionError);
}

TEST_CASE("value_decay_check worked examples") {
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);

    CHECK(value_decay_check(sys, sr, vf, Vector::Zero(1), 5.0, 1e-3) ==
          doctest::Approx(0.0));

    const double at_20 = value_decay_check(sys, sr, vf, Vector::Constant(1, 1.0), 20.0, 1e-3);
    CHECK(at_20 <=
          std::exp(-2.0 * std::sqrt(2.0) * 20.0) * (std::sqrt(2.0) - 1.0) * (1.0 + 1e-3));

    const double at_10 = value_decay_check(sys, sr, vf, Vector::Constant(1, 1.0), 10.0, 1e-3);
    CHECK(at_20 <= at_10);
}

TEST_CASE("value-function identities on random stabilizable systems") {
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 4;
        const int m = 1 + trial % 2;
        Matrix a(n, n), b(n, m), c(n, n);
        std::normal_distribution<double> dist(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(rng), dist(rng));
            for (int j = 0; j < m; ++j) b(i, j) = Complex(dist(rng), dist(rng));
            for (int j = 0; j < n; ++j) c(i, j) = Complex(dist(rng), dist(rng));
        }
        const StateSpaceSystem sys(a, b, c, Matrix::Zero(n, m));
        if (!is_stabilizable(a, b).stabilizable) continue;
        const SupplyRate sr(HermitianMatrix::Identity(n), Matrix::Zero(n, m),
                            HermitianMatrix::Identity(m));
        const auto vf = value_function(sys, sr);

        // Val is itself a certified storage (Thm. 5.4 (b)).
        CHECK(check_dissipative(sys, sr, QuadraticStorage{vf.P_val}).certificate.is_psd);

        // Quadratic homogeneity and the parallelogram identity, exact for the form.
        const Vector x = random_vector(n);
        const Vector y = random_vector(n);
        const Complex lambda(0.0, 2.0);
        CHECK(vf.eval(lambda * x) ==
              doctest::Approx(std::norm(lambda) * vf.eval(x)).epsilon(1e-10));
        CHECK(vf.eval(x + y) + vf.eval(x - y) ==
              doctest::Approx(2.0 * vf.eval(x) + 2.0 * vf.eval(y)).epsilon(1e-10));
    }
}

TEST_CASE("closed loop saturates the balance; suboptimality-gap identity") {
    const auto sys = lqr_system();
    const auto sr = lqr_supply();
    const auto vf = value_function(sys, sr);
    const Matrix f = optimal_feedback(sys, sr, vf);
    const auto report = lure_factor(sys, sr, QuadraticStorage{vf.P_val});
    REQUIRE(report.lure.has_value());

    // Optimal loop: rate integral and balance residual vanish.
    const auto opt = simulate(sys, Vector::Constant(1, 1.0),
                              InputSignal::feedback(f, InputSignal::zero()), 15.0, 1e-3);
    const auto bal = dissipation_balance(opt, QuadraticStorage{vf.P_val}, sr, report.lure);
    CHECK(std::abs(*bal.rate_integral) < 1e-8);
    CHECK(std::abs(bal.lhs) < 1e-6);

    // Any stabilizing loop: J = Val(x0) + integral of the rate.
    const Matrix f_sub = scalar(-1.5);  // suboptimal but stabilizing
    const auto sub = simulate(sys, Vector::Constant(1, 1.0),
                              InputSignal::feedback(f_sub, InputSignal::zero()), 25.0, 1e-3);
    double cost = supply_integral(sub, sr);
    double rate = 0.0;
    {
        const auto rep = dissipation_balance(sub, QuadraticStorage{vf.P_val}, sr, report.lure);
        rate = *rep.rate_integral;
    }
    const double val0 = vf.eval(Vector::Constant(1, 1.0));
    CHECK(cost == doctest::Approx(val0 + rate).epsilon(1e-6));
}
