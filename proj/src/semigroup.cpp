#include "monoper/semigroup.hpp"

#include "monoper/errors.hpp"
#include "monoper/matrix_exponential.hpp"
#include "monoper/ordered_space.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monoper {

bool is_positivity_generator(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    if (a.rows() != a.cols()) throw DimensionError("is_positivity_generator: matrix must be square");
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j && a(i, j) > 0.0) return false;
        }
    }
    return true;
}

double growth_exponent(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    if (a.rows() != a.cols()) throw DimensionError("growth_exponent: matrix must be square");
    if (a.rows() == 0) throw DimensionError("growth_exponent: empty matrix");
    if (!a.allFinite()) throw NumericalError("growth_exponent: non-finite matrix entries");

    double min_re = 0.0;
    if (a.isApprox(a.transpose(), 0.0)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalError("growth_exponent: symmetric eigensolver did not converge");
        }
        min_re = es.eigenvalues().minCoeff();
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) {
            throw NumericalError("growth_exponent: eigensolver did not converge");
        }
        min_re = es.eigenvalues().real().minCoeff();
    }
    return -min_re;
}

Generator::Generator(Eigen::MatrixXd matrix, double shift)
    : matrix_(std::move(matrix)), shift_(shift), nu0_(0.0), positive_(false) {
    if (!(shift_ >= 0.0) || !std::isfinite(shift_)) {
        throw std::invalid_argument("Generator: shift must be finite and >= 0");
    }
    nu0_ = monoper::growth_exponent(matrix_);
    positive_ = is_positivity_generator(matrix_);
}

Generator::Generator(Eigen::MatrixXd matrix, double shift, double nu0, bool positive)
    : matrix_(std::move(matrix)), shift_(shift), nu0_(nu0), positive_(positive) {}

Eigen::MatrixXd Generator::shifted_matrix() const {
    Eigen::MatrixXd m = matrix_;
    m.diagonal().array() += shift_;
    return m;
}

Generator Generator::with_shift(double shift) const {
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw std::invalid_argument("Generator::with_shift: shift must be finite and >= 0");
    }
    return Generator(matrix_, shift, nu0_, positive_);
}

double default_shift_margin(double nu0) noexcept { return 0.1 * std::max(1.0, std::abs(nu0)); }

Generator finalize_shift(const Generator& g, double candidate, double margin) {
    if (!(candidate >= 0.0)) throw std::invalid_argument("finalize_shift: candidate must be >= 0");
    if (!(margin > 0.0)) throw std::invalid_argument("finalize_shift: margin must be > 0");
    const double nu0 = g.growth_exponent();
    if (nu0 - candidate < 0.0) return g.with_shift(candidate);
    return g.with_shift(candidate + std::abs(nu0) + margin);
}

Generator finalize_shift(const Eigen::Ref<const Eigen::MatrixXd>& a, double candidate,
                         double margin) {
    return finalize_shift(Generator(a), candidate, margin);
}

Eigen::MatrixXd propagator(const Generator& g, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("propagator: time must be >= 0");
    return expm(-t * g.shifted_matrix());
}

Eigen::VectorXd semigroup_apply(const Generator& g, double t,
                                const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != g.dimension()) throw DimensionError("semigroup_apply: dimension mismatch");
    return propagator(g, t) * x;
}

double sup_norm_bound(const Generator& g, double omega, int substeps) {
    if (!g.is_stable()) {
        throw StabilityError("sup_norm_bound: shifted generator is not exponentially stable");
    }
    if (!(omega > 0.0) || substeps < 1) {
        throw std::invalid_argument("sup_norm_bound: need omega > 0 and substeps >= 1");
    }
    const double horizon = 10.0 / std::abs(g.shifted_growth_exponent());
    long periods = std::max(1L, static_cast<long>(std::ceil(horizon / omega)));
    const double dt = omega / substeps;
    const Eigen::MatrixXd step = propagator(g, dt);
    const Eigen::Index n = g.dimension();

    // For a positive semigroup the max-row-sum norm of S(t) is ||S(t) 1||_inf,
    // so a single vector propagation suffices.
    constexpr int kMaxDoublings = 20;
    double best = 1.0;
    long done = 0;
    int doublings = 0;
    if (g.is_positive()) {
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        Eigen::VectorXd row_sums = ones;
        for (;;) {
            for (; done < periods * substeps; ++done) {
                row_sums = step * row_sums;
                best = std::max(best, row_sums.cwiseAbs().maxCoeff());
            }
            if (row_sums.cwiseAbs().maxCoeff() < 1.0) break;
            if (++doublings > kMaxDoublings) throw NumericalError("sup_norm_bound: no decay observed");
            periods *= 2;
        }
    } else {
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
        for (;;) {
            for (; done < periods * substeps; ++done) {
                power = step * power;
                best = std::max(best, max_row_sum_norm(power));
            }
            if (max_row_sum_norm(power) < 1.0) break;
            if (++doublings > kMaxDoublings) throw NumericalError("sup_norm_bound: no decay observed");
            periods *= 2;
        }
    }
    return best;
}

}  // namespace monoper
