#pragma once

#include "monoper/periodic_grid_function.hpp"
#include "monoper/problem.hpp"

#include <optional>
#include <string_view>

namespace monoper {

enum class ProblemKind { Parabolic1d, TransportPeriodic, ScalarDelay };

[[nodiscard]] std::string_view to_string(ProblemKind k) noexcept;
[[nodiscard]] ProblemKind parse_problem_kind(std::string_view name);

/// Spatial weight multiplying the periodic forcing term.
enum class ForcingProfile { Uniform, Sine };

/// Pointwise reaction
///   f(x, t, u, v) = source + forcing * sin(2 pi t / omega) * profile(x)
///                 + state * u + delayed * v + state_quadratic * u^2
///                 + delayed_quadratic * v^2
/// applied componentwise. profile is 1 (Uniform) or sin(pi x) on (0, 1) for
/// the parabolic kind and (1 + sin x) / 2 for the transport kind (Sine).
struct Reaction {
    double source = 0.0;
    double forcing = 0.0;
    ForcingProfile profile = ForcingProfile::Uniform;
    double state = 0.0;
    double delayed = 0.0;
    double state_quadratic = 0.0;
    double delayed_quadratic = 0.0;

    [[nodiscard]] bool is_linear() const noexcept {
        return state_quadratic == 0.0 && delayed_quadratic == 0.0;
    }
    [[nodiscard]] double operator()(double profile_value, double phase, double u,
                                    double v) const noexcept;
};

/// Shape of the upper solution; the lower solution is always a constant.
enum class UpperShape {
    Constant,
    /// K * psi with psi the discrete solution of A psi = 1 (parabolic only).
    Torsion,
};

struct ProblemRecipe {
    ProblemKind kind = ProblemKind::ScalarDelay;
    Eigen::Index spatial_nodes = 1;
    Eigen::Index time_nodes = 64;
    double period = 0.0;
    double delay = 0.0;
    /// Decay rate a of the scalar kind, diffusion coefficient of the
    /// parabolic kind, transport speed of the transport kind.
    double coefficient = 1.0;
    Reaction reaction;
    std::optional<double> lower_value;
    /// Scale K of the upper solution; searched by doubling from 1 when absent.
    std::optional<double> upper_scale;
    std::optional<UpperShape> upper_shape;
    HypothesisConstants constants;
};

/// (n+1)^2 * d * tridiag(-1, 2, -1): Dirichlet Laplacian on (0, 1).
[[nodiscard]] Eigen::MatrixXd dirichlet_laplacian(Eigen::Index n, double diffusion = 1.0);

/// Periodic upwind difference (A u)_i = c (u_i - u_{i-1}) / h on [0, 2 pi), h = 2 pi / n.
[[nodiscard]] Eigen::MatrixXd upwind_transport(Eigen::Index n, double speed = 1.0);

/// Grid points of the spatial discretization for each kind.
[[nodiscard]] Eigen::VectorXd spatial_points(const ProblemRecipe& recipe);

/// Dispatches on recipe.kind. Every builder verifies the bracket and throws
/// BracketError when v0 or w0 fails its differential inequality.
[[nodiscard]] DelayedProblem build_problem(const ProblemRecipe& recipe);
[[nodiscard]] DelayedProblem build_parabolic(const ProblemRecipe& recipe);
[[nodiscard]] DelayedProblem build_transport(const ProblemRecipe& recipe);
[[nodiscard]] DelayedProblem build_scalar(const ProblemRecipe& recipe);

/// u' + a u = k u(t - tau) + c sin(2 pi t / omega) with v0 = -K, w0 = K,
/// K = (|c| + 1) / (a - k). Requires a > 0, k >= 0 and rejects a <= k.
[[nodiscard]] DelayedProblem build_scalar_delay(double a, double k, double c, double tau,
                                                double omega, Eigen::Index time_nodes);
[[nodiscard]] ProblemRecipe scalar_delay_recipe(double a, double k, double c, double tau,
                                                double omega, Eigen::Index time_nodes);

/// Brute-force reference: integrates the delay equation forward by the
/// method of steps with exponential-Euler substeps (dt / substeps), history
/// v0 on [-tau, 0], for `periods` periods, and returns the last period on
/// the problem grid. Throws NumericalError if the state norm exceeds
/// 1e6 * max(1, ||w0||_C).
[[nodiscard]] PeriodicGridFunction timestep_oracle(const DelayedProblem& p, int periods,
                                                   int substeps);

/// Closed-form periodic solution of a linear scalar recipe
///   u' + a u = s + alpha u + k u(t - tau) + c sin(w t),   w = 2 pi / omega:
/// u = s / (a - alpha - k) + Im(U e^{i w t}),  U = c / (i w + a - alpha - k e^{-i w tau}).
/// Returns nullopt when the recipe is not a linear scalar problem.
[[nodiscard]] std::optional<PeriodicGridFunction> fourier_oracle(const ProblemRecipe& recipe,
                                                                 Eigen::Index time_nodes);

/// Time-independent solution of an autonomous linear recipe: solves
/// (A - alpha I - k I) u = s * 1. Returns nullopt when forcing != 0 or the
/// reaction is nonlinear.
[[nodiscard]] std::optional<PeriodicGridFunction> steady_state_oracle(const ProblemRecipe& recipe,
                                                                      Eigen::Index time_nodes);

}  // namespace monoper
