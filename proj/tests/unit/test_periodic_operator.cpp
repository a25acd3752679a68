#include "monoper/errors.hpp"
#include "monoper/ordered_space.hpp"
#include "monoper/periodic_operator.hpp"
#include "monoper/problems.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace monoper;
using monoper::testing::Gen;
using monoper::testing::kPi;

namespace {

Generator scalar_generator(double a, double shift = 0.0) {
    return Generator(Eigen::MatrixXd::Constant(1, 1, a), shift);
}

PeriodicGridFunction sine(double omega, Eigen::Index m) {
    return PeriodicGridFunction::sample(omega, m, 1, [](double t) { return Eigen::VectorXd::Constant(1, std::sin(t)); });
}

double sine_error(Quadrature q, Eigen::Index m) {
    const PeriodicOperator op(scalar_generator(1.0), 2 * kPi, m, q);
    const PeriodicGridFunction u = apply_P(op, sine(2 * kPi, m));
    double err = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double t = u.time(j);
        err = std::max(err, std::abs(u.at(j)(0) - 0.5 * (std::sin(t) - std::cos(t))));
    }
    return err;
}

}  // namespace

TEST(Quadrature, NamesRoundTrip) {
    for (const Quadrature q : {Quadrature::Trapezoid, Quadrature::ExponentialTrapezoid}) {
        EXPECT_EQ(parse_quadrature(to_string(q)), q);
    }
    EXPECT_THROW((void)parse_quadrature("simpson"), std::invalid_argument);
}

TEST(PeriodicResolvent, GeometricSeries) {
    const Eigen::MatrixXd r = periodic_resolvent(scalar_generator(1.0), std::log(2.0));
    EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
}

TEST(PeriodicResolvent, NeutralGeneratorRejected) {
    EXPECT_THROW((void)periodic_resolvent(scalar_generator(0.0), 1.0), StabilityError);
    EXPECT_THROW(PeriodicOperator(scalar_generator(0.0), 1.0, 8), StabilityError);
}

TEST(PeriodicResolvent, TransportBound) {
    const Generator g(upwind_transport(64), 1.0);
    const double bound = std::exp(2 * kPi) / (std::exp(2 * kPi) - 1.0);
    EXPECT_LE(max_row_sum_norm(periodic_resolvent(g, 2 * kPi)), bound + 1e-9);
}

TEST(PeriodicResolvent, AgreesWithNeumannSeries) {
    Gen gen(3);
    const Generator g(gen.metzler_generator(6, 1.0, 4.0), 0.3);
    ASSERT_TRUE(g.is_stable());
    const double omega = 1.5;
    const Eigen::MatrixXd s = propagator(g, omega);
    // e^{nu1 K omega} < 1e-12
    const int terms = static_cast<int>(std::ceil(std::log(1e-12) / (g.shifted_growth_exponent() * omega))) + 1;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(6, 6);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(6, 6);
    for (int k = 1; k <= terms; ++k) {
        power = power * s;
        sum += power;
    }
    EXPECT_LT((periodic_resolvent(g, omega) - sum).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PeriodicOperator, PeriodPropagatorAndPositivity) {
    Gen gen(4);
    const Generator g = finalize_shift(gen.metzler_generator(5, 0.5, 2.0), 0.0, 0.3);
    const PeriodicOperator op(g, 2.0, 40);
    EXPECT_LT((op.period_propagator() - propagator(g, 2.0)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(op.resolvent().minCoeff(), -1e-12);
    EXPECT_GE(op.step_propagator().minCoeff(), -1e-12);
    EXPECT_GE(op.left_weight().minCoeff(), -1e-12);
    EXPECT_GE(op.right_weight().minCoeff(), -1e-12);
    const double rho = op.period_propagator().eigenvalues().cwiseAbs().maxCoeff();
    EXPECT_LE(rho, std::exp(g.shifted_growth_exponent() * 2.0) + 1e-10);
}

TEST(PeriodicOperator, TrapezoidWeights) {
    const Generator g(scalar_generator(2.0));
    const PeriodicOperator op(g, 1.0, 10, Quadrature::Trapezoid);
    EXPECT_NEAR(op.left_weight()(0, 0), 0.05 * std::exp(-0.2), 1e-15);
    EXPECT_NEAR(op.right_weight()(0, 0), 0.05, 1e-15);
}

TEST(PeriodicOperator, ExponentialWeightsIntegrateConstantsExactly) {
    // int_0^dt e^{-a s} ds = (1 - e^{-a dt}) / a
    const double a = 3.0, dt = 0.1;
    const PeriodicOperator op(scalar_generator(a), 1.0, 10);
    EXPECT_NEAR(op.left_weight()(0, 0) + op.right_weight()(0, 0), -std::expm1(-a * dt) / a, 1e-15);
}

TEST(PeriodicOperator, RejectsBadGrids) {
    EXPECT_THROW(PeriodicOperator(scalar_generator(1.0), 1.0, 1), DimensionError);
    EXPECT_THROW(PeriodicOperator(scalar_generator(1.0), -1.0, 4), std::invalid_argument);
}

TEST(ApplyP, ConstantEquilibrium) {
    for (const double omega : {0.5, 2 * kPi, 10.0}) {
        const PeriodicOperator op(scalar_generator(1.0), omega, 32);
        const auto u = apply_P(op, PeriodicGridFunction::constant(omega, 32, Eigen::VectorXd::Ones(1)));
        EXPECT_LT((u.values().array() - 1.0).abs().maxCoeff(), 1e-13) << omega;
        const PeriodicOperator trap(scalar_generator(1.0), omega, 32, Quadrature::Trapezoid);
        const auto v = apply_P(trap, PeriodicGridFunction::constant(omega, 32, Eigen::VectorXd::Ones(1)));
        const double dt = omega / 32;
        EXPECT_LT((v.values().array() - 1.0).abs().maxCoeff(), dt * dt) << omega;
    }
}

TEST(ApplyP, SinusoidClosedFormSecondOrder) {
    for (const Quadrature q : {Quadrature::Trapezoid, Quadrature::ExponentialTrapezoid}) {
        const double e64 = sine_error(q, 64), e128 = sine_error(q, 128), e256 = sine_error(q, 256);
        const double dt = 2 * kPi / 64;
        EXPECT_LT(e64, dt * dt);
        EXPECT_NEAR(e64 / e128, 4.0, 0.2) << to_string(q);
        EXPECT_NEAR(e128 / e256, 4.0, 0.2) << to_string(q);
    }
}

TEST(ApplyP, ZeroForcingGivesZero) {
    Gen gen(8);
    const PeriodicOperator op(Generator(gen.metzler_generator(4, 1.0, 2.0)), 3.0, 16);
    const auto u = apply_P(op, PeriodicGridFunction::zeros(3.0, 16, 4));
    EXPECT_EQ(u.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(ApplyP, GridMismatch) {
    const PeriodicOperator op(scalar_generator(1.0), 1.0, 8);
    EXPECT_THROW((void)apply_P(op, PeriodicGridFunction::zeros(1.0, 9, 1)), DimensionError);
    EXPECT_THROW((void)apply_P(op, PeriodicGridFunction::zeros(2.0, 8, 1)), DimensionError);
    EXPECT_THROW((void)apply_P(op, PeriodicGridFunction::zeros(1.0, 8, 2)), DimensionError);
}

TEST(IvpSolve, ReturnsToPeriodicInitialValue) {
    Gen gen(9);
    const Generator g(gen.metzler_generator(3, 0.5, 2.0));
    const double omega = 2.0;
    const PeriodicOperator op(g, omega, 50);
    const auto h = gen.grid_function(omega, 50, 3);
    const auto u = apply_P(op, h);
    const Trajectory traj = ivp_solve(g, u.at(0), h, omega);
    ASSERT_EQ(traj.samples(), 51);
    EXPECT_LT((traj.states.col(50) - u.at(0)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(IvpSolve, HomogeneousDecay) {
    const Generator g = scalar_generator(1.0);
    const Trajectory traj =
        ivp_solve(g, Eigen::VectorXd::Ones(1), PeriodicGridFunction::zeros(1.0, 10, 1), 3.0);
    for (Eigen::Index k = 0; k < traj.samples(); ++k) {
        EXPECT_NEAR(traj.states(0, k), std::exp(-0.1 * static_cast<double>(k)), 1e-14);
    }
}

TEST(IvpSolve, ConvergesToAttractor) {
    const Trajectory traj = ivp_solve(scalar_generator(1.0), Eigen::VectorXd::Zero(1),
                                      PeriodicGridFunction::constant(1.0, 10, Eigen::VectorXd::Ones(1)), 30.0);
    EXPECT_NEAR(traj.states(0, traj.samples() - 1), 1.0, 1e-10);
}

TEST(IvpSolve, TranslationConsistency) {
    Gen gen(10);
    const Generator g(gen.metzler_generator(3, 0.5, 2.0));
    const PeriodicOperator op(g, 1.0, 20);
    const auto h = gen.grid_function(1.0, 20, 3);
    const auto u = apply_P(op, h);
    const Trajectory traj = ivp_solve(g, u.at(0), h, 2.0);
    for (Eigen::Index j = 0; j < 20; ++j) {
        EXPECT_LT((traj.states.col(j) - traj.states.col(j + 20)).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT((traj.states.col(j) - u.at(j)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(IvpSolve, ForgetsInitialValue) {
    Gen gen(12);
    const Generator g(gen.metzler_generator(3, 1.0, 2.0));
    const double omega = 1.0;
    const PeriodicOperator op(g, omega, 20);
    const auto h = gen.grid_function(omega, 20, 3);
    const auto u = apply_P(op, h);
    const double nu1 = g.shifted_growth_exponent();
    const double horizon = std::ceil(20.0 / std::abs(nu1));
    const Eigen::VectorXd x0 = gen.vector(3, -5.0, 5.0);
    const Trajectory traj = ivp_solve(g, x0, h, horizon);
    const Eigen::Index last = traj.samples() - 1;
    double err = 0.0;
    for (Eigen::Index j = 0; j <= 20; ++j) {
        err = std::max(err, (traj.states.col(last - 20 + j) - u.at(j)).cwiseAbs().maxCoeff());
    }
    const double distance = (x0 - u.at(0)).cwiseAbs().maxCoeff();
    const double m_s = sup_norm_bound(g, omega, 20);
    EXPECT_LE(err, m_s * distance * std::exp(nu1 * (horizon - omega)) + 1e-12);
}

TEST(IvpSolve, Errors) {
    const Generator g = scalar_generator(1.0);
    const auto h = PeriodicGridFunction::zeros(1.0, 10, 1);
    EXPECT_THROW((void)ivp_solve(g, Eigen::VectorXd::Zero(2), h, 1.0), DimensionError);
    EXPECT_THROW((void)ivp_solve(g, Eigen::VectorXd::Zero(1), h, 0.25), std::invalid_argument);
}

TEST(MildResidual, ZeroForDiscreteMildSolution) {
    Gen gen(13);
    const PeriodicOperator op(Generator(gen.metzler_generator(4, 0.5, 3.0)), 2.0, 30);
    const auto h = gen.grid_function(2.0, 30, 4);
    EXPECT_LE(mild_residual(op, apply_P(op, h), h), 1e-10);
}

TEST(MildResidual, DetectsSingleNodePerturbation) {
    const PeriodicOperator op(scalar_generator(1.0), 2 * kPi, 32);
    const auto h = sine(2 * kPi, 32);
    auto u = apply_P(op, h);
    const double eps = 1e-3;
    u.at(7)(0) += eps;
    EXPECT_GE(mild_residual(op, u, h), eps / 2);
}

TEST(MildResidual, EquilibriumWithinQuadratureError) {
    const double dt = 0.1;
    const PeriodicOperator op(scalar_generator(1.0), 1.0, 10, Quadrature::Trapezoid);
    const auto one = PeriodicGridFunction::constant(1.0, 10, Eigen::VectorXd::Ones(1));
    EXPECT_LE(mild_residual(op, one, one), dt * dt * dt);
    const PeriodicOperator exact(scalar_generator(1.0), 1.0, 10);
    EXPECT_LE(mild_residual(exact, one, one), 1e-15);
}
