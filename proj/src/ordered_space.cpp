#include "monoper/ordered_space.hpp"

#include "monoper/errors.hpp"
#include "monoper/periodic_grid_function.hpp"

#include <string>

namespace monoper {

ConeOrder::ConeOrder(Eigen::Index n, double tol) : dimension(n), tolerance(tol) {
    if (n < 1) throw DimensionError("ConeOrder: dimension must be >= 1");
    if (!(tol >= 0.0)) throw std::invalid_argument("ConeOrder: tolerance must be >= 0");
}

bool cone_contains(const Eigen::Ref<const Eigen::VectorXd>& x, const ConeOrder& order) {
    if (x.size() != order.dimension) {
        throw DimensionError("cone_contains: vector has dimension " + std::to_string(x.size()) +
                             ", order expects " + std::to_string(order.dimension));
    }
    return x.minCoeff() >= -order.tolerance;
}

bool leq(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
         const ConeOrder& order) {
    if (x.size() != y.size()) throw DimensionError("leq: operands differ in dimension");
    return cone_contains(y - x, order);
}

bool in_order_interval(const PeriodicGridFunction& u, const PeriodicGridFunction& v,
                       const PeriodicGridFunction& w, double tolerance) {
    require_same_grid(u, v, "in_order_interval");
    require_same_grid(u, w, "in_order_interval");
    const ConeOrder order(u.dimension(), tolerance);
    for (Eigen::Index j = 0; j < u.nodes(); ++j) {
        if (!leq(v.at(j), u.at(j), order) || !leq(u.at(j), w.at(j), order)) return false;
    }
    return true;
}

double max_norm(const Eigen::Ref<const Eigen::VectorXd>& x) {
    return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
}

double max_row_sum_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace monoper
