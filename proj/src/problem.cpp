#include "monoper/problem.hpp"

#include "monoper/errors.hpp"
#include "monoper/ordered_space.hpp"

#include <cmath>
#include <string>

namespace monoper {

double HypothesisConstants::derived_C() const {
    const double c2 = C2.value_or(0.0);
    const double c3 = C3.value_or(0.0);
    if (c3 == 0.0) return c2;
    if (!C1 || *C1 <= 0.0) throw ConstantsError("derived C undefined: C1 = 0 with C3 > 0");
    return c2 + c3 / *C1;
}

double HypothesisConstants::shift_candidate() const {
    return uses_derived_shift() ? derived_C() : C;
}

void HypothesisConstants::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConstantsError(std::string("constant ") + name + " must be finite and >= 0");
        }
    };
    check(C, "C");
    check(N, "N");
    if (N < 1.0) throw ConstantsError("normal constant N must be >= 1");
    if (C1) check(*C1, "C1");
    if (C2) check(*C2, "C2");
    if (C3) check(*C3, "C3");
    if (L1) check(*L1, "L1");
    if (L2) check(*L2, "L2");
}

DelayedProblem::DelayedProblem(Generator generator, Rhs rhs, double period, double delay,
                               PeriodicGridFunction lower, PeriodicGridFunction upper,
                               HypothesisConstants constants)
    : generator_(std::move(generator)),
      rhs_(std::move(rhs)),
      period_(period),
      delay_(0.0),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      constants_(constants) {
    if (!rhs_) throw std::invalid_argument("DelayedProblem: empty right-hand side");
    if (!(period_ > 0.0) || !std::isfinite(period_)) {
        throw std::invalid_argument("DelayedProblem: period must be positive and finite");
    }
    if (!(delay >= 0.0) || !std::isfinite(delay)) {
        throw std::invalid_argument("DelayedProblem: delay must be finite and >= 0");
    }
    delay_ = std::fmod(delay, period_);
    require_same_grid(lower_, upper_, "DelayedProblem");
    if (lower_.dimension() != generator_.dimension()) {
        throw DimensionError("DelayedProblem: bracket dimension differs from generator");
    }
    if (std::abs(lower_.period() - period_) > 1e-12 * period_) {
        throw DimensionError("DelayedProblem: bracket period differs from problem period");
    }
    constants_.validate();
    if (!in_order_interval(lower_, lower_, upper_, 0.0)) {
        throw BracketError("DelayedProblem: lower solution exceeds upper solution (v0 <= w0 fails)");
    }
}

Eigen::VectorXd DelayedProblem::eval(double t, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = rhs_(t, x, y);
    if (out.size() != dimension()) {
        throw DimensionError("F returned dimension " + std::to_string(out.size()) + ", expected " +
                             std::to_string(dimension()));
    }
    if (!out.allFinite()) throw NumericalError("F returned non-finite values at t = " + std::to_string(t));
    return out;
}

}  // namespace monoper
