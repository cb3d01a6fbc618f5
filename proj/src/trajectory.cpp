#include "dissip/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace dissip {

InputSignal InputSignal::zero() { return InputSignal(Kind::Zero); }

InputSignal InputSignal::constant(Vector u0) {
    InputSignal s(Kind::Constant);
    s.u0_ = std::move(u0);
    return s;
}

InputSignal InputSignal::sine(Vector amplitude, double frequency_rad, double phase) {
    InputSignal s(Kind::Sine);
    s.u0_ = std::move(amplitude);
    s.frequency_ = frequency_rad;
    s.phase_ = phase;
    return s;
}

InputSignal InputSignal::sampled(std::vector<double> times, std::vector<Vector> values) {
    if (times.size() != values.size() || times.empty()) {
        throw DimensionError("sampled input: times and values must have equal nonzero length");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            throw PreconditionError("sampled input: times must be strictly increasing");
        }
    }
    InputSignal s(Kind::Sampled);
    s.sample_times_ = std::move(times);
    s.sample_values_ = std::move(values);
    return s;
}

InputSignal InputSignal::feedback(Matrix f, InputSignal v) {
    if (v.is_feedback()) throw PreconditionError("feedback input: offset must be open loop");
    InputSignal s(Kind::Feedback);
    s.gain_ = std::move(f);
    s.offset_ = std::make_shared<const InputSignal>(std::move(v));
    return s;
}

const Matrix& InputSignal::feedback_gain() const {
    if (!is_feedback()) throw PreconditionError("not a feedback input");
    return gain_;
}

const InputSignal& InputSignal::feedback_offset() const {
    if (!is_feedback()) throw PreconditionError("not a feedback input");
    return *offset_;
}

Vector InputSignal::eval(double t, Eigen::Index m) const {
    switch (kind_) {
        case Kind::Zero:
            return Vector::Zero(m);
        case Kind::Constant:
            if (u0_.size() != m) throw DimensionError("constant input: dimension mismatch");
            return u0_;
        case Kind::Sine:
            if (u0_.size() != m) throw DimensionError("sine input: dimension mismatch");
            return u0_ * std::sin(frequency_ * t + phase_);
        case Kind::Sampled: {
            if (sample_values_.front().size() != m) {
                throw DimensionError("sampled input: dimension mismatch");
            }
            if (t <= sample_times_.front()) return sample_values_.front();
            if (t >= sample_times_.back()) return sample_values_.back();
            const auto it = std::upper_bound(sample_times_.begin(), sample_times_.end(), t);
            const std::size_t hi = static_cast<std::size_t>(it - sample_times_.begin());
            const std::size_t lo = hi - 1;
            const double w = (t - sample_times_[lo]) / (sample_times_[hi] - sample_times_[lo]);
            return (1.0 - w) * sample_values_[lo] + w * sample_values_[hi];
        }
        case Kind::Feedback:
            throw PreconditionError("feedback input has no open-loop value");
    }
    throw PreconditionError("unreachable");
}

Trajectory Trajectory::segment(std::size_t i0, std::size_t i1) const {
    if (i0 > i1 || i1 >= size()) throw PreconditionError("trajectory segment: bad index range");
    Trajectory out;
    out.dt = dt;
    out.scheme = scheme;
    out.times.assign(times.begin() + i0, times.begin() + i1 + 1);
    out.states.assign(states.begin() + i0, states.begin() + i1 + 1);
    out.inputs.assign(inputs.begin() + i0, inputs.begin() + i1 + 1);
    out.outputs.assign(outputs.begin() + i0, outputs.begin() + i1 + 1);
    return out;
}

Trajectory simulate(const StateSpaceSystem& sys, const Vector& x0, const InputSignal& input,
                    double total_time, double dt) {
    if (!(total_time > 0.0) || !(dt > 0.0) || dt > total_time) {
        throw PreconditionError("simulate: need 0 < dt <= T");
    }
    if (x0.size() != sys.n()) throw DimensionError("simulate: x0 dimension mismatch");

    const bool closed_loop = input.is_feedback();
    const Matrix* gain = closed_loop ? &input.feedback_gain() : nullptr;
    if (closed_loop && (gain->rows() != sys.m() || gain->cols() != sys.n())) {
        throw DimensionError("simulate: feedback gain must be m x n");
    }
    const InputSignal& open = closed_loop ? input.feedback_offset() : input;

    auto input_at = [&](double t, const Vector& x) -> Vector {
        Vector u = open.eval(t, sys.m());
        if (closed_loop) u += (*gain) * x;
        return u;
    };
    auto deriv = [&](double t, const Vector& x) -> Vector {
        return sys.A * x + sys.B * input_at(t, x);
    };

    const auto steps = static_cast<std::size_t>(std::llround(total_time / dt));
    Trajectory traj;
    traj.dt = dt;
    traj.scheme = Scheme::Rk4;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.inputs.reserve(steps + 1);
    traj.outputs.reserve(steps + 1);

    Vector x = x0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (!x.allFinite()) {
            throw DivergenceError("simulate: state diverged", k == 0 ? 0 : k - 1);
        }
        const Vector u = input_at(t, x);
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.inputs.push_back(u);
        traj.outputs.push_back(sys.C * x + sys.D * u);
        if (k == steps) break;

        const Vector k1 = deriv(t, x);
        const Vector k2 = deriv(t + 0.5 * dt, x + 0.5 * dt * k1);
        const Vector k3 = deriv(t + 0.5 * dt, x + 0.5 * dt * k2);
        const Vector k4 = deriv(t + dt, x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return traj;
}

namespace {

double trapezoid(const std::vector<double>& f, double dt) {
    if (f.size() < 2) return 0.0;
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
    return sum * dt;
}

}  // namespace

double supply_integral(const Trajectory& traj, const SupplyRate& sr) {
    std::vector<double> samples(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        samples[k] = supply_eval(sr, traj.outputs[k], traj.inputs[k]);
    }
    return trapezoid(samples, traj.dt);
}

BalanceReport dissipation_balance(const Trajectory& traj, const QuadraticStorage& st,
                                  const SupplyRate& sr, const std::optional<LurePair>& lure) {
    if (traj.size() == 0) throw PreconditionError("dissipation_balance: empty trajectory");
    BalanceReport report;
    report.delta_storage = st.eval(traj.states.back()) - st.eval(traj.states.front());
    report.supply_integral = supply_integral(traj, sr);
    report.lhs = report.delta_storage + report.supply_integral;
    if (lure) {
        std::vector<double> rate(traj.size());
        for (std::size_t k = 0; k < traj.size(); ++k) {
            rate[k] = dissipation_rate(*lure, traj.states[k], traj.inputs[k]);
        }
        report.rate_integral = trapezoid(rate, traj.dt);
    }
    report.residual = report.lhs - report.rate_integral.value_or(0.0);
    return report;
}

namespace {

/// Unnormalized bump with support (-1/n, 0).
double bump(double t, int n) {
    const double z = 2.0 * n * t + 1.0;  // maps (-1/n, 0) to (-1, 1)
    if (z <= -1.0 || z >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - z * z));
}

}  // namespace

MollifierKernel mollifier_kernel(int n, int samples) {
    if (n < 1) throw PreconditionError("mollifier_kernel: n must be >= 1");
    if (samples < 3) throw PreconditionError("mollifier_kernel: need at least 3 samples");
    MollifierKernel kernel;
    kernel.times.resize(samples);
    kernel.values.resize(samples);
    const double width = 1.0 / n;
    const double dt = width / (samples - 1);
    for (int j = 0; j < samples; ++j) {
        kernel.times(j) = -width + j * dt;
        kernel.values(j) = bump(kernel.times(j), n);
    }
    double integral = dt * (kernel.values.sum() - 0.5 * (kernel.values(0) + kernel.values(samples - 1)));
    kernel.values /= integral;
    return kernel;
}

Trajectory mollify(const Trajectory& traj, const StateSpaceSystem& sys, int n) {
    if (n < 1) throw PreconditionError("mollify: n must be >= 1");
    const double width = 1.0 / n;
    if (!(width < traj.final_time())) {
        throw PreconditionError("mollify: need 1/n < T");
    }
    // Kernel resampled on the trajectory grid; offsets tau_j = -j dt.
    const auto lag = static_cast<std::size_t>(std::floor(width / traj.dt + 1e-12));
    if (lag < 2) throw PreconditionError("mollify: trajectory grid too coarse for 1/n support");
    Eigen::VectorXd weights(lag + 1);
    for (std::size_t j = 0; j <= lag; ++j) {
        weights(static_cast<Eigen::Index>(j)) = bump(-static_cast<double>(j) * traj.dt, n);
    }
    weights /= weights.sum();  // unit mass on the grid, constants preserved exactly

    const std::size_t out_len = traj.size() - lag;
    Trajectory out;
    out.dt = traj.dt;
    out.scheme = traj.scheme;
    out.times.assign(traj.times.begin(), traj.times.begin() + out_len);
    out.states.resize(out_len);
    out.inputs.resize(out_len);
    out.outputs.resize(out_len);
    for (std::size_t k = 0; k < out_len; ++k) {
        Vector x = Vector::Zero(sys.n());
        Vector u = Vector::Zero(sys.m());
        for (std::size_t j = 0; j <= lag; ++j) {
            const double w = weights(static_cast<Eigen::Index>(j));
            x += w * traj.states[k + j];  // x(t - tau_j) = x(t + j dt)
            u += w * traj.inputs[k + j];
        }
        out.states[k] = x;
        out.inputs[k] = u;
        out.outputs[k] = sys.C * x + sys.D * u;
    }
    return out;
}

}  // namespace dissip
