#pragma once

#include "monoper/periodic_operator.hpp"
#include "monoper/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace monoper {

/// Builds the periodic operator of the shifted equation
/// u' + (A + C I) u = F + C u: the shift starts from the hypothesis constant
/// and is raised by finalize_shift until the semigroup is stable.
[[nodiscard]] PeriodicOperator make_operator(const DelayedProblem& p,
                                             Quadrature quadrature = Quadrature::ExponentialTrapezoid,
                                             std::optional<double> margin = std::nullopt);

/// Node values F(t_j, u(t_j), u(t_j - tau)) + C u(t_j). The delayed sample
/// is a periodic linear interpolation when tau is not a grid multiple.
[[nodiscard]] PeriodicGridFunction eval_F_shifted(const DelayedProblem& p,
                                                  const PeriodicGridFunction& u, double shift);

/// Q u = P(F(., u, u(. - tau)) + C u) with C the shift of `op`.
[[nodiscard]] PeriodicGridFunction apply_Q(const DelayedProblem& p, const PeriodicOperator& op,
                                           const PeriodicGridFunction& u);

struct BracketCheck {
    bool ok = false;
    /// Most negative slack of the differential inequality (positive when strict).
    double worst_slack = 0.0;
    Eigen::Index node = 0;
    Eigen::Index component = 0;
};

/// Checks v' + A v <= F(t, v, v(t - tau)) at every node with a periodic
/// central difference for v'. Default tolerance 1e-8.
[[nodiscard]] BracketCheck verify_lower_solution(const DelayedProblem& p,
                                                 const PeriodicGridFunction& v,
                                                 double tol = 1e-8);
/// Checks w' + A w >= F(t, w, w(t - tau)).
[[nodiscard]] BracketCheck verify_upper_solution(const DelayedProblem& p,
                                                 const PeriodicGridFunction& w,
                                                 double tol = 1e-8);

enum class IterationStatus {
    ExtremalPair,
    UniqueSolution,
    MonotonicityViolated,
    MaxIterReached,
};
[[nodiscard]] std::string_view to_string(IterationStatus s) noexcept;

struct IterationOptions {
    double tolerance = 1e-8;
    int max_iter = 500;
    /// Sandwich slack is slack_scale * (1 + ||w0||_C).
    double slack_scale = 1e-9;
    bool keep_iterates = true;
};

/// Location of the first order violation found by `iterate`.
struct MonotonicityViolation {
    int step = 0;
    Eigen::Index node = 0;
    Eigen::Index component = 0;
    std::string inequality;
    double amount = 0.0;
};

/// Record of the twin iteration v_i = Q v_{i-1}, w_i = Q w_{i-1}.
struct IterationReport {
    std::vector<PeriodicGridFunction> lower_iterates;  // v_0, v_1, ...
    std::vector<PeriodicGridFunction> upper_iterates;  // w_0, w_1, ...
    /// Per step i >= 1: the most negative slack over the four order
    /// inequalities v_{i-1} <= v_i, v_i <= w_i, w_i <= w_{i-1}, v_0 <= v_i.. w_i <= w_0.
    std::vector<double> monotone_slack;
    std::vector<double> gaps;          // ||w_i - v_i||_C, index 0 = initial bracket
    std::vector<double> lower_steps;   // ||v_i - v_{i-1}||_C, i >= 1
    std::vector<double> upper_steps;
    std::vector<double> contraction_ratios;  // gaps[i] / gaps[i-1]
    double lower_fixed_point_residual = 0.0;  // ||Q v - v||_C
    double upper_fixed_point_residual = 0.0;
    double lower_mild_residual = 0.0;         // mild_residual(v, F_shifted(v))
    double upper_mild_residual = 0.0;
    double slack = 0.0;
    int iterations = 0;
    IterationStatus status = IterationStatus::MaxIterReached;
    std::optional<MonotonicityViolation> violation;
    std::optional<PeriodicGridFunction> minimal;
    std::optional<PeriodicGridFunction> maximal;

    [[nodiscard]] bool converged() const noexcept {
        return status == IterationStatus::ExtremalPair ||
               status == IterationStatus::UniqueSolution;
    }
};

/// Runs the monotone iteration from the problem's bracket. Stops once both
/// step sizes are within tolerance and the gap is within tolerance or no
/// longer shrinks by more than it. Throws BracketError when v0 or w0 fails
/// its differential inequality.
[[nodiscard]] IterationReport iterate(const DelayedProblem& p, const PeriodicOperator& op,
                                      const IterationOptions& options = {});

/// Uniqueness certificate kappa = N (L1 + C + L2 C1) C_S M_S omega.
struct Certificate {
    double kappa = 0.0;
    bool certified = false;
    double shift = 0.0;            // C entering kappa
    double resolvent_norm = 0.0;   // C_S
    double sup_norm = 0.0;         // M_S
    double lipschitz_factor = 0.0; // L1 + C + L2 C1
};

/// Throws ConstantsError when L1, L2, or a needed C1 is missing.
[[nodiscard]] Certificate uniqueness_certificate(const DelayedProblem& p,
                                                 const PeriodicOperator& op);

struct ExtremalityResult {
    bool ok = false;
    int probes = 0;
    /// Largest amount by which a probe limit left [u_min, u_max].
    double worst_excess = 0.0;
};

/// Seeds Q-iterations from the lower solution, the bracket midpoint and
/// random points of [v0, w0] (probe count total) and checks that each limit
/// lands in [u_min, u_max] within slack.
[[nodiscard]] ExtremalityResult extremality_check(const DelayedProblem& p,
                                                  const PeriodicOperator& op,
                                                  const IterationReport& report, int probes,
                                                  std::uint64_t seed = 20240501,
                                                  const IterationOptions& options = {});

}  // namespace monoper
