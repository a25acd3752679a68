#pragma once

#include <Eigen/Dense>

namespace monoper {

/// Square matrix A such that -A generates T(t) = e^{-tA}, together with a
/// spectral shift C >= 0. The shifted semigroup is S(t) = e^{-Ct} T(t)
/// = e^{-t(A + C I)}.
///
/// The growth exponent nu0 = -min Re(eig A) is computed once on
/// construction; the shifted exponent is nu1 = nu0 - C.
class Generator {
public:
    /// Throws DimensionError for a non-square matrix and NumericalError if
    /// the eigensolver fails.
    explicit Generator(Eigen::MatrixXd matrix, double shift = 0.0);

    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return matrix_.rows(); }
    [[nodiscard]] double shift() const noexcept { return shift_; }
    [[nodiscard]] double growth_exponent() const noexcept { return nu0_; }
    [[nodiscard]] double shifted_growth_exponent() const noexcept { return nu0_ - shift_; }
    [[nodiscard]] bool is_positive() const noexcept { return positive_; }
    [[nodiscard]] bool is_stable() const noexcept { return shifted_growth_exponent() < 0.0; }

    /// A + C I
    [[nodiscard]] Eigen::MatrixXd shifted_matrix() const;

    /// Same matrix, different shift; reuses the cached spectrum.
    [[nodiscard]] Generator with_shift(double shift) const;

private:
    Generator(Eigen::MatrixXd matrix, double shift, double nu0, bool positive);

    Eigen::MatrixXd matrix_;
    double shift_;
    double nu0_;
    bool positive_;
};

/// True iff every off-diagonal entry of A is <= 0, i.e. -A is Metzler, which
/// in finite dimension is equivalent to e^{-tA} >= 0 for all t >= 0.
[[nodiscard]] bool is_positivity_generator(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// nu0 = -min Re(lambda) over the eigenvalues of A.
[[nodiscard]] double growth_exponent(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Default shift margin 0.1 * max(1, |nu0|).
[[nodiscard]] double default_shift_margin(double nu0) noexcept;

/// Keeps `candidate` when nu0 - candidate < 0, otherwise raises the shift to
/// candidate + |nu0| + margin. The returned generator is always stable.
[[nodiscard]] Generator finalize_shift(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                       double candidate, double margin);
[[nodiscard]] Generator finalize_shift(const Generator& g, double candidate, double margin);

/// S(t) = e^{-t(A + C I)} as a matrix. Throws std::invalid_argument for t < 0.
[[nodiscard]] Eigen::MatrixXd propagator(const Generator& g, double t);

/// S(t) x.
[[nodiscard]] Eigen::VectorXd semigroup_apply(const Generator& g, double t,
                                              const Eigen::Ref<const Eigen::VectorXd>& x);

/// Estimate of M_S = sup_{t >= 0} ||S(t)||_inf.
///
/// Maximizes the max-row-sum norm over the grid t_k = k * omega / substeps on
/// [0, T], where T is the smallest multiple of omega beyond 10 / |nu1|. T is
/// doubled until ||S(T)|| < 1, which bounds the tail t > T by the grid
/// maximum. Values between grid points are not certified. Result >= 1.
[[nodiscard]] double sup_norm_bound(const Generator& g, double omega, int substeps);

}  // namespace monoper
