#pragma once

#include <Eigen/Dense>

#include <functional>

namespace monoper {

/// An omega-periodic function t -> R^n sampled on the uniform grid
/// t_j = j * omega / m, j = 0..m-1.
///
/// Column j of `values()` holds u(t_j). Indices wrap modulo m and times
/// reduce modulo omega, so u(t_m) is u(t_0) by construction.
class PeriodicGridFunction {
public:
    PeriodicGridFunction(double period, Eigen::MatrixXd values);

    /// Zero function with n components on m nodes.
    static PeriodicGridFunction zeros(double period, Eigen::Index m, Eigen::Index n);
    static PeriodicGridFunction constant(double period, Eigen::Index m,
                                         const Eigen::VectorXd& value);
    static PeriodicGridFunction sample(double period, Eigen::Index m, Eigen::Index n,
                                       const std::function<Eigen::VectorXd(double)>& f);

    [[nodiscard]] double period() const noexcept { return period_; }
    [[nodiscard]] Eigen::Index nodes() const noexcept { return values_.cols(); }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return values_.rows(); }
    [[nodiscard]] double step() const noexcept { return period_ / static_cast<double>(nodes()); }
    [[nodiscard]] double time(Eigen::Index j) const noexcept {
        return static_cast<double>(j) * step();
    }

    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] Eigen::MatrixXd& values() noexcept { return values_; }

    /// Value at node j, with j taken modulo m (negative j allowed).
    [[nodiscard]] Eigen::MatrixXd::ConstColXpr at(Eigen::Index j) const {
        return values_.col(wrap(j));
    }
    [[nodiscard]] Eigen::MatrixXd::ColXpr at(Eigen::Index j) { return values_.col(wrap(j)); }

    [[nodiscard]] Eigen::Index wrap(Eigen::Index j) const noexcept {
        const Eigen::Index m = nodes();
        Eigen::Index r = j % m;
        return r < 0 ? r + m : r;
    }

    /// Periodic piecewise-linear evaluation at an arbitrary real time.
    [[nodiscard]] Eigen::VectorXd evaluate(double t) const;

    /// The function s -> u(s - lag) on the same grid, by periodic linear
    /// interpolation. Grid-multiple lags are exact index shifts.
    [[nodiscard]] PeriodicGridFunction lagged(double lag) const;

    /// max_j ||u(t_j)||_inf
    [[nodiscard]] double sup_norm() const;

    [[nodiscard]] bool same_grid(const PeriodicGridFunction& other) const noexcept;

    PeriodicGridFunction& operator+=(const PeriodicGridFunction& other);
    PeriodicGridFunction& operator-=(const PeriodicGridFunction& other);
    PeriodicGridFunction& operator*=(double s);

    friend PeriodicGridFunction operator+(PeriodicGridFunction a, const PeriodicGridFunction& b) {
        return a += b;
    }
    friend PeriodicGridFunction operator-(PeriodicGridFunction a, const PeriodicGridFunction& b) {
        return a -= b;
    }
    friend PeriodicGridFunction operator*(double s, PeriodicGridFunction a) { return a *= s; }

private:
    double period_;
    Eigen::MatrixXd values_;
};

/// Throws DimensionError unless a and b share period, node count and dimension.
void require_same_grid(const PeriodicGridFunction& a, const PeriodicGridFunction& b,
                       const char* context);

/// Splits a lag into whole grid steps and a fractional remainder in [0, 1).
struct LagSplit {
    Eigen::Index whole = 0;
    double fraction = 0.0;
};
[[nodiscard]] LagSplit split_lag(double lag, double period, Eigen::Index nodes);

}  // namespace monoper
