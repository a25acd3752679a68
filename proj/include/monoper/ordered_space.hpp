#pragma once

#include <Eigen/Dense>

namespace monoper {

class PeriodicGridFunction;

/// Componentwise order on R^n induced by the cone K = {x : x_j >= 0}.
///
/// Inequalities are tested with an absolute slack `tolerance`: x is in K
/// when min_j x_j >= -tolerance. With the max norm this cone is normal
/// with constant N = 1.
struct ConeOrder {
    Eigen::Index dimension = 1;
    double tolerance = 0.0;

    /// Slack used by solver-facing checks; absorbs matrix-exponential roundoff.
    static constexpr double kSolverTolerance = 1e-10;
    static constexpr double kNormalConstant = 1.0;

    ConeOrder() = default;
    ConeOrder(Eigen::Index n, double tol);
};

[[nodiscard]] bool cone_contains(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const ConeOrder& order);

[[nodiscard]] bool leq(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const ConeOrder& order);

/// True iff v(t_j) <= u(t_j) <= w(t_j) at every grid node.
[[nodiscard]] bool in_order_interval(const PeriodicGridFunction& u,
                                     const PeriodicGridFunction& v,
                                     const PeriodicGridFunction& w,
                                     double tolerance = 0.0);

/// Max (infinity) norm of a vector.
[[nodiscard]] double max_norm(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Operator norm induced by the max norm: largest absolute row sum.
[[nodiscard]] double max_row_sum_norm(const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace monoper
