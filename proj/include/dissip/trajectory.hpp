#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dissip/kyp.hpp"

namespace dissip {

/// Open-loop or state-feedback input signal u(t).
class InputSignal {
public:
    static InputSignal zero();
    static InputSignal constant(Vector u0);
    static InputSignal sine(Vector amplitude, double frequency_rad, double phase = 0.0);
    /// Piecewise-linear interpolation of samples; times strictly increasing.
    static InputSignal sampled(std::vector<double> times, std::vector<Vector> values);
    /// Closed loop u = F x + v(t); v must not itself be a feedback signal.
    static InputSignal feedback(Matrix f, InputSignal v);

    bool is_feedback() const { return kind_ == Kind::Feedback; }
    const Matrix& feedback_gain() const;
    const InputSignal& feedback_offset() const;

    /// Evaluate an open-loop signal at time t (feedback signals throw).
    Vector eval(double t, Eigen::Index m) const;

private:
    enum class Kind { Zero, Constant, Sine, Sampled, Feedback };
    InputSignal(Kind kind) : kind_(kind) {}

    Kind kind_;
    Vector u0_;          // constant / sine amplitude
    double frequency_ = 0.0;
    double phase_ = 0.0;
    std::vector<double> sample_times_;
    std::vector<Vector> sample_values_;
    Matrix gain_;
    std::shared_ptr<const InputSignal> offset_;
};

enum class Scheme { Rk4, ExactTransportShift };

/// Sampled trajectory on the uniform grid t_k = k dt. Outputs always satisfy
/// y_k = C x_k + D u_k exactly (they are recomputed from states and inputs).
struct Trajectory {
    double dt = 0.0;
    Scheme scheme = Scheme::Rk4;
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Vector> inputs;
    std::vector<Vector> outputs;

    std::size_t size() const { return times.size(); }
    double final_time() const { return times.back(); }

    /// Sub-trajectory over the index range [i0, i1] (inclusive).
    Trajectory segment(std::size_t i0, std::size_t i1) const;
};

struct BalanceReport {
    double delta_storage = 0.0;
    double supply_integral = 0.0;
    std::optional<double> rate_integral;
    double lhs = 0.0;       // delta_storage + supply_integral
    double residual = 0.0;  // lhs - rate_integral (when present)
};

/// Integrate xdot = Ax + Bu(t) by classical RK4 on the grid t_k = k dt.
/// Feedback inputs are evaluated stage-wise with the stage state.
Trajectory simulate(const StateSpaceSystem& sys, const Vector& x0, const InputSignal& input,
                    double total_time, double dt);

/// Trapezoid integral of the supply rate along the trajectory grid.
double supply_integral(const Trajectory& traj, const SupplyRate& sr);

/// Dissipation balance S(x(T)) - S(x(0)) + int s dt, optionally against the
/// dissipation-rate integral int ||Kx + Lu||^2 dt.
BalanceReport dissipation_balance(const Trajectory& traj, const QuadraticStorage& st,
                                  const SupplyRate& sr,
                                  const std::optional<LurePair>& lure = std::nullopt);

/// Smooth bump kernel with support in (-1/n, 0], sampled on a uniform grid
/// and normalized so the trapezoid integral is 1.
struct MollifierKernel {
    Eigen::VectorXd times;   // uniform grid spanning [-1/n, 0]
    Eigen::VectorXd values;  // nonnegative samples
};
MollifierKernel mollifier_kernel(int n, int samples = 1001);

/// Discrete convolution of the trajectory with the mollifier kernel;
/// the result lives on [0, T - 1/n].
Trajectory mollify(const Trajectory& traj, const StateSpaceSystem& sys, int n);

}  // namespace dissip
