#include "monoper/periodic_operator.hpp"

#include "monoper/errors.hpp"
#include "monoper/matrix_exponential.hpp"
#include "monoper/ordered_space.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace monoper {

std::string_view to_string(Quadrature q) noexcept {
    switch (q) {
        case Quadrature::Trapezoid: return "trapezoid";
        case Quadrature::ExponentialTrapezoid: return "exponential";
    }
    return "unknown";
}

Quadrature parse_quadrature(std::string_view name) {
    if (name == "trapezoid") return Quadrature::Trapezoid;
    if (name == "exponential") return Quadrature::ExponentialTrapezoid;
    throw std::invalid_argument("unknown quadrature '" + std::string(name) +
                                "' (expected trapezoid or exponential)");
}

namespace {

void require_stable(const Generator& g, const char* context) {
    if (!g.is_stable()) {
        throw StabilityError(std::string(context) +
                             ": not exponentially stable; apply finalize_shift first (nu0 - C = " +
                             std::to_string(g.shifted_growth_exponent()) + ")");
    }
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& base, Eigen::Index exponent) {
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(base.rows(), base.cols());
    Eigen::MatrixXd square = base;
    while (exponent > 0) {
        if (exponent & 1) result = result * square;
        exponent >>= 1;
        if (exponent > 0) square = square * square;
    }
    return result;
}

struct StepWeights {
    Eigen::MatrixXd propagator;
    Eigen::MatrixXd left;
    Eigen::MatrixXd right;
};

StepWeights step_weights(const Generator& g, double dt, Quadrature q) {
    const Eigen::MatrixXd x = -dt * g.shifted_matrix();
    if (q == Quadrature::Trapezoid) {
        Eigen::MatrixXd s = expm(x);
        Eigen::MatrixXd left = 0.5 * dt * s;
        Eigen::MatrixXd right = 0.5 * dt * Eigen::MatrixXd::Identity(s.rows(), s.cols());
        return {std::move(s), std::move(left), std::move(right)};
    }
    PhiFunctions phi = phi_functions(x);
    Eigen::MatrixXd left = dt * (phi.phi1 - phi.phi2);
    Eigen::MatrixXd right = dt * phi.phi2;
    return {std::move(phi.exp), std::move(left), std::move(right)};
}

Eigen::MatrixXd quadrature_increments(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                                      const Eigen::MatrixXd& h) {
    const Eigen::Index m = h.cols();
    Eigen::MatrixXd next(h.rows(), m);
    next.leftCols(m - 1) = h.rightCols(m - 1);
    next.col(m - 1) = h.col(0);
    return left * h + right * next;
}

}  // namespace

Eigen::MatrixXd periodic_resolvent(const Generator& g, double omega) {
    require_stable(g, "periodic_resolvent");
    if (!(omega > 0.0)) throw std::invalid_argument("periodic_resolvent: omega must be > 0");
    const Eigen::Index n = g.dimension();
    const Eigen::MatrixXd closure = Eigen::MatrixXd::Identity(n, n) - propagator(g, omega);
    return closure.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

PeriodicOperator::PeriodicOperator(Generator generator, double period, Eigen::Index nodes,
                                   Quadrature quadrature)
    : generator_(std::move(generator)), period_(period), nodes_(nodes), quadrature_(quadrature) {
    require_stable(generator_, "PeriodicOperator");
    if (!(period_ > 0.0) || !std::isfinite(period_)) {
        throw std::invalid_argument("PeriodicOperator: period must be positive and finite");
    }
    if (nodes_ < 2) throw DimensionError("PeriodicOperator: need at least 2 nodes");
    if (nodes_ == 2) std::clog << "warning: periodic grid with only 2 nodes\n";

    const double dt = step();
    StepWeights w = step_weights(generator_, dt, quadrature_);
    step_propagator_ = std::move(w.propagator);
    left_weight_ = std::move(w.left);
    right_weight_ = std::move(w.right);

    if (quadrature_ == Quadrature::Trapezoid) {
        const double stiffness = dt * max_row_sum_norm(generator_.shifted_matrix());
        if (stiffness > 1.0) {
            std::clog << "warning: stiff step (dt * ||A + C I|| = " << stiffness
                      << "); trapezoid weights are inaccurate, consider exponential quadrature\n";
        }
    }

    const Eigen::Index n = dimension();
    period_propagator_ = matrix_power(step_propagator_, nodes_);
    resolvent_ = (Eigen::MatrixXd::Identity(n, n) - period_propagator_)
                     .partialPivLu()
                     .solve(Eigen::MatrixXd::Identity(n, n));
    if (!resolvent_.allFinite()) throw NumericalError("PeriodicOperator: singular periodic closure");
}

double PeriodicOperator::resolvent_norm() const { return max_row_sum_norm(resolvent_); }

void PeriodicOperator::require_compatible(const PeriodicGridFunction& f, const char* context) const {
    if (f.nodes() != nodes_ || f.dimension() != dimension() ||
        std::abs(f.period() - period_) > 1e-12 * period_) {
        throw DimensionError(std::string(context) + ": grid function does not match operator grid");
    }
}

Eigen::MatrixXd PeriodicOperator::increments(const PeriodicGridFunction& h) const {
    require_compatible(h, "increments");
    return quadrature_increments(left_weight_, right_weight_, h.values());
}

PeriodicGridFunction apply_P(const PeriodicOperator& op, const PeriodicGridFunction& h) {
    op.require_compatible(h, "apply_P");
    const Eigen::MatrixXd q = op.increments(h);
    const Eigen::MatrixXd& s = op.step_propagator();
    const Eigen::Index m = op.nodes();

    Eigen::VectorXd accumulated = Eigen::VectorXd::Zero(op.dimension());
    for (Eigen::Index j = 0; j < m; ++j) accumulated = s * accumulated + q.col(j);

    Eigen::MatrixXd u(op.dimension(), m);
    u.col(0) = op.resolvent() * accumulated;
    for (Eigen::Index j = 0; j + 1 < m; ++j) u.col(j + 1) = s * u.col(j) + q.col(j);
    return {op.period(), std::move(u)};
}

Trajectory ivp_solve(const Generator& g, const Eigen::Ref<const Eigen::VectorXd>& x0,
                     const PeriodicGridFunction& h, double horizon, Quadrature quadrature) {
    if (x0.size() != g.dimension() || h.dimension() != g.dimension()) {
        throw DimensionError("ivp_solve: dimension mismatch");
    }
    const double dt = h.step();
    const double ratio = horizon / dt;
    const auto steps = static_cast<Eigen::Index>(std::llround(ratio));
    if (!(horizon > 0.0) || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument("ivp_solve: horizon must be a positive multiple of the grid step");
    }
    const StepWeights w = step_weights(g, dt, quadrature);
    const Eigen::MatrixXd q = quadrature_increments(w.left, w.right, h.values());

    Trajectory out{dt, Eigen::MatrixXd(g.dimension(), steps + 1)};
    out.states.col(0) = x0;
    for (Eigen::Index k = 0; k < steps; ++k) {
        out.states.col(k + 1) = w.propagator * out.states.col(k) + q.col(h.wrap(k));
    }
    return out;
}

double mild_residual(const PeriodicOperator& op, const PeriodicGridFunction& u,
                     const PeriodicGridFunction& h) {
    op.require_compatible(u, "mild_residual");
    const Eigen::MatrixXd q = op.increments(h);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < op.nodes(); ++j) {
        const Eigen::VectorXd r = u.at(j + 1) - op.step_propagator() * u.at(j) - q.col(j);
        worst = std::max(worst, max_norm(r));
    }
    return worst;
}

}  // namespace monoper
