#pragma once

#include "monoper/periodic_grid_function.hpp"
#include "monoper/semigroup.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace monoper {

/// Rule for the one-step integral q_j = int_{t_j}^{t_{j+1}} S(t_{j+1} - s) h(s) ds.
enum class Quadrature {
    /// (dt/2) (S(dt) h_j + h_{j+1}); second order, nonnegative weights.
    Trapezoid,
    /// Exact integral of the piecewise-linear interpolant of h:
    /// dt (phi1 - phi2) h_j + dt phi2 h_{j+1}, phi_k evaluated at -dt (A + C I).
    /// Second order and accurate for stiff generators.
    ExponentialTrapezoid,
};

[[nodiscard]] std::string_view to_string(Quadrature q) noexcept;
/// Accepts "trapezoid" and "exponential". Throws std::invalid_argument otherwise.
[[nodiscard]] Quadrature parse_quadrature(std::string_view name);

/// (I - S(omega))^{-1} for a stable generator, by direct LU solve.
/// Throws StabilityError when nu1 >= 0.
[[nodiscard]] Eigen::MatrixXd periodic_resolvent(const Generator& g, double omega);

/// Solution operator P of u' + (A + C I) u = h on omega-periodic grid
/// functions: (P h)(t) = (I - S(omega))^{-1} int_{t-omega}^{t} S(t - s) h(s) ds.
///
/// Stores the step propagator S(dt), dt = omega / m, the period propagator
/// S(omega) = S(dt)^m, the periodic resolvent and the quadrature weights.
/// Immutable after construction.
class PeriodicOperator {
public:
    PeriodicOperator(Generator generator, double period, Eigen::Index nodes,
                     Quadrature quadrature = Quadrature::ExponentialTrapezoid);

    [[nodiscard]] const Generator& generator() const noexcept { return generator_; }
    [[nodiscard]] double period() const noexcept { return period_; }
    [[nodiscard]] Eigen::Index nodes() const noexcept { return nodes_; }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return generator_.dimension(); }
    [[nodiscard]] double step() const noexcept { return period_ / static_cast<double>(nodes_); }
    [[nodiscard]] Quadrature quadrature() const noexcept { return quadrature_; }

    [[nodiscard]] const Eigen::MatrixXd& step_propagator() const noexcept { return step_propagator_; }
    [[nodiscard]] const Eigen::MatrixXd& period_propagator() const noexcept { return period_propagator_; }
    [[nodiscard]] const Eigen::MatrixXd& resolvent() const noexcept { return resolvent_; }
    /// Weight applied to h(t_j) in q_j.
    [[nodiscard]] const Eigen::MatrixXd& left_weight() const noexcept { return left_weight_; }
    /// Weight applied to h(t_{j+1}) in q_j.
    [[nodiscard]] const Eigen::MatrixXd& right_weight() const noexcept { return right_weight_; }

    /// C_S = ||(I - S(omega))^{-1}||_inf
    [[nodiscard]] double resolvent_norm() const;

    /// Quadrature increments q_0..q_{m-1} as columns.
    [[nodiscard]] Eigen::MatrixXd increments(const PeriodicGridFunction& h) const;

    void require_compatible(const PeriodicGridFunction& f, const char* context) const;

private:
    Generator generator_;
    double period_;
    Eigen::Index nodes_;
    Quadrature quadrature_;
    Eigen::MatrixXd step_propagator_;
    Eigen::MatrixXd period_propagator_;
    Eigen::MatrixXd resolvent_;
    Eigen::MatrixXd left_weight_;
    Eigen::MatrixXd right_weight_;
};

/// Discrete periodic mild solution u = P h:
///   u_{j+1} = S(dt) u_j + q_j,   u_0 = (I - S(omega))^{-1} sum_j S(dt)^{m-1-j} q_j.
[[nodiscard]] PeriodicGridFunction apply_P(const PeriodicOperator& op,
                                           const PeriodicGridFunction& h);

/// Mild solution trajectory of the initial value problem u(0) = x0 on
/// [0, horizon], sampled every h.step(). Column k is u(k dt).
struct Trajectory {
    double step = 0.0;
    Eigen::MatrixXd states;

    [[nodiscard]] Eigen::Index samples() const noexcept { return states.cols(); }
};

/// u(t) = S(t) x0 + int_0^t S(t - s) h(s) ds by the same recurrence as
/// apply_P, without periodic closure. `horizon` must be a multiple of the
/// step of h.
[[nodiscard]] Trajectory ivp_solve(const Generator& g, const Eigen::Ref<const Eigen::VectorXd>& x0,
                                   const PeriodicGridFunction& h, double horizon,
                                   Quadrature quadrature = Quadrature::ExponentialTrapezoid);

/// max_j ||u_{j+1} - S(dt) u_j - q_j(h)||_inf over one period (wrapping).
[[nodiscard]] double mild_residual(const PeriodicOperator& op, const PeriodicGridFunction& u,
                                   const PeriodicGridFunction& h);

}  // namespace monoper
