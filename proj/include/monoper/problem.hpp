#pragma once

#include "monoper/periodic_grid_function.hpp"
#include "monoper/semigroup.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace monoper {

/// Right-hand side F(t, x, y) of u' + A u = F(t, u(t), u(t - tau)); x is the
/// current state, y the delayed state. Must be omega-periodic in t.
using Rhs = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y)>;

/// Constants of the one-sided Lipschitz and growth hypotheses.
///
///   (H1)  F(t,x2,y2) - F(t,x1,y1) >= -C (x2 - x1)
///   (H3)  u2(t) - u1(t) >= C1 (u2(t-tau) - u1(t-tau))
///   (H4)  F(t,x2,y2) - F(t,x1,y1) >= -C2 (x2 - x1) - C3 (y2 - y1)
///   (H5)  F(t,x2,y2) - F(t,x1,y1) <=  L1 (x2 - x1) + L2 (y2 - y1)
///
/// for ordered arguments inside the bracket [v0, w0].
struct HypothesisConstants {
    double C = 0.0;
    std::optional<double> C1;
    std::optional<double> C2;
    std::optional<double> C3;
    std::optional<double> L1;
    std::optional<double> L2;
    double N = 1.0;

    /// True when (H4) constants were supplied, so C is derived as C2 + C3 / C1.
    [[nodiscard]] bool uses_derived_shift() const noexcept { return C2 || C3; }

    /// C2 + C3 / C1. Throws ConstantsError when C1 = 0 (or absent) and C3 > 0.
    [[nodiscard]] double derived_C() const;

    /// The constant making F + C u order preserving: derived_C() when (H4)
    /// constants are present, else C.
    [[nodiscard]] double shift_candidate() const;

    /// Throws ConstantsError on negative or non-finite entries.
    void validate() const;
};

/// Periodic delay problem u' + A u = F(t, u(t), u(t - tau)) with a
/// lower/upper solution bracket v0 <= w0 sampled on a common grid.
///
/// The delay is stored reduced modulo omega: solutions are omega-periodic,
/// so u(t - tau) = u(t - (tau mod omega)).
class DelayedProblem {
public:
    /// Throws DimensionError on shape mismatch and BracketError unless
    /// v0 <= w0 at every node.
    DelayedProblem(Generator generator, Rhs rhs, double period, double delay,
                   PeriodicGridFunction lower, PeriodicGridFunction upper,
                   HypothesisConstants constants = {});

    [[nodiscard]] const Generator& generator() const noexcept { return generator_; }
    [[nodiscard]] const Rhs& rhs() const noexcept { return rhs_; }
    [[nodiscard]] double period() const noexcept { return period_; }
    [[nodiscard]] double delay() const noexcept { return delay_; }
    [[nodiscard]] const PeriodicGridFunction& lower() const noexcept { return lower_; }
    [[nodiscard]] const PeriodicGridFunction& upper() const noexcept { return upper_; }
    [[nodiscard]] const HypothesisConstants& constants() const noexcept { return constants_; }
    [[nodiscard]] HypothesisConstants& constants() noexcept { return constants_; }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return generator_.dimension(); }
    [[nodiscard]] Eigen::Index nodes() const noexcept { return lower_.nodes(); }

    /// F(t, x, y) with dimension and finiteness checks.
    [[nodiscard]] Eigen::VectorXd eval(double t, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& y) const;

private:
    Generator generator_;
    Rhs rhs_;
    double period_;
    double delay_;
    PeriodicGridFunction lower_;
    PeriodicGridFunction upper_;
    HypothesisConstants constants_;
};

}  // namespace monoper
