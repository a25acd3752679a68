#include "monoper/periodic_grid_function.hpp"

#include "monoper/errors.hpp"

#include <cmath>
#include <string>

namespace monoper {

PeriodicGridFunction::PeriodicGridFunction(double period, Eigen::MatrixXd values)
    : period_(period), values_(std::move(values)) {
    if (!(period_ > 0.0) || !std::isfinite(period_)) {
        throw std::invalid_argument("PeriodicGridFunction: period must be positive and finite");
    }
    if (values_.cols() < 2) throw DimensionError("PeriodicGridFunction: need at least 2 nodes");
    if (values_.rows() < 1) throw DimensionError("PeriodicGridFunction: dimension must be >= 1");
}

PeriodicGridFunction PeriodicGridFunction::zeros(double period, Eigen::Index m, Eigen::Index n) {
    return {period, Eigen::MatrixXd::Zero(n, m)};
}

PeriodicGridFunction PeriodicGridFunction::constant(double period, Eigen::Index m,
                                                   const Eigen::VectorXd& value) {
    return {period, value.replicate(1, m)};
}

PeriodicGridFunction PeriodicGridFunction::sample(double period, Eigen::Index m, Eigen::Index n,
                                                 const std::function<Eigen::VectorXd(double)>& f) {
    PeriodicGridFunction out = zeros(period, m, n);
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::VectorXd v = f(out.time(j));
        if (v.size() != n) throw DimensionError("PeriodicGridFunction::sample: wrong dimension");
        out.values_.col(j) = v;
    }
    return out;
}

LagSplit split_lag(double lag, double period, Eigen::Index nodes) {
    double reduced = std::fmod(lag, period);
    if (reduced < 0.0) reduced += period;
    const double steps = reduced * static_cast<double>(nodes) / period;
    double whole = std::floor(steps);
    double fraction = steps - whole;
    // Snap lags that are grid multiples up to roundoff.
    if (fraction < 1e-12) {
        fraction = 0.0;
    } else if (fraction > 1.0 - 1e-12) {
        fraction = 0.0;
        whole += 1.0;
    }
    return {static_cast<Eigen::Index>(whole) % nodes, fraction};
}

Eigen::VectorXd PeriodicGridFunction::evaluate(double t) const {
    const LagSplit s = split_lag(t, period_, nodes());
    if (s.fraction == 0.0) return at(s.whole);
    return (1.0 - s.fraction) * at(s.whole) + s.fraction * at(s.whole + 1);
}

PeriodicGridFunction PeriodicGridFunction::lagged(double lag) const {
    const LagSplit s = split_lag(lag, period_, nodes());
    PeriodicGridFunction out(period_, Eigen::MatrixXd(values_.rows(), values_.cols()));
    for (Eigen::Index j = 0; j < nodes(); ++j) {
        if (s.fraction == 0.0) {
            out.values_.col(j) = at(j - s.whole);
        } else {
            out.values_.col(j) = (1.0 - s.fraction) * at(j - s.whole) + s.fraction * at(j - s.whole - 1);
        }
    }
    return out;
}

double PeriodicGridFunction::sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

bool PeriodicGridFunction::same_grid(const PeriodicGridFunction& other) const noexcept {
    return nodes() == other.nodes() && dimension() == other.dimension() &&
           std::abs(period_ - other.period_) <= 1e-12 * period_;
}

PeriodicGridFunction& PeriodicGridFunction::operator+=(const PeriodicGridFunction& other) {
    require_same_grid(*this, other, "operator+=");
    values_ += other.values_;
    return *this;
}

PeriodicGridFunction& PeriodicGridFunction::operator-=(const PeriodicGridFunction& other) {
    require_same_grid(*this, other, "operator-=");
    values_ -= other.values_;
    return *this;
}

PeriodicGridFunction& PeriodicGridFunction::operator*=(double s) {
    values_ *= s;
    return *this;
}

void require_same_grid(const PeriodicGridFunction& a, const PeriodicGridFunction& b,
                       const char* context) {
    if (!a.same_grid(b)) {
        throw DimensionError(std::string(context) + ": grid mismatch (" +
                             std::to_string(a.dimension()) + "x" + std::to_string(a.nodes()) +
                             " vs " + std::to_string(b.dimension()) + "x" +
                             std::to_string(b.nodes()) + ")");
    }
}

}  // namespace monoper
