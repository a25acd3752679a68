#include "monoper/problems.hpp"

#include "monoper/errors.hpp"
#include "monoper/matrix_exponential.hpp"
#include "monoper/monotone_solver.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace monoper {

std::string_view to_string(ProblemKind k) noexcept {
    switch (k) {
        case ProblemKind::Parabolic1d: return "parabolic_1d";
        case ProblemKind::TransportPeriodic: return "transport_periodic";
        case ProblemKind::ScalarDelay: return "scalar_delay";
    }
    return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
    if (name == "parabolic_1d") return ProblemKind::Parabolic1d;
    if (name == "transport_periodic") return ProblemKind::TransportPeriodic;
    if (name == "scalar_delay") return ProblemKind::ScalarDelay;
    throw std::invalid_argument("unknown problem kind '" + std::string(name) +
                                "' (expected parabolic_1d, transport_periodic or scalar_delay)");
}

double Reaction::operator()(double profile_value, double phase, double u, double v) const noexcept {
    return source + forcing * phase * profile_value + state * u + delayed * v +
           state_quadratic * u * u + delayed_quadratic * v * v;
}

Eigen::MatrixXd dirichlet_laplacian(Eigen::Index n, double diffusion) {
    if (n < 1) throw DimensionError("dirichlet_laplacian: need n >= 1");
    const double scale = diffusion * static_cast<double>((n + 1) * (n + 1));
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = 2.0 * scale;
        if (i > 0) a(i, i - 1) = -scale;
        if (i + 1 < n) a(i, i + 1) = -scale;
    }
    return a;
}

Eigen::MatrixXd upwind_transport(Eigen::Index n, double speed) {
    if (n < 2) throw DimensionError("upwind_transport: need n >= 2");
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    const double scale = speed / h;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = scale;
        a(i, (i + n - 1) % n) = -scale;
    }
    return a;
}

Eigen::VectorXd spatial_points(const ProblemRecipe& recipe) {
    const Eigen::Index n = recipe.spatial_nodes;
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        switch (recipe.kind) {
            case ProblemKind::Parabolic1d:
                x(i) = static_cast<double>(i + 1) / static_cast<double>(n + 1);
                break;
            case ProblemKind::TransportPeriodic:
                x(i) = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
                break;
            case ProblemKind::ScalarDelay:
                x(i) = 0.0;
                break;
        }
    }
    return x;
}

namespace {

Eigen::VectorXd profile_values(const ProblemRecipe& recipe) {
    const Eigen::VectorXd x = spatial_points(recipe);
    Eigen::VectorXd p = Eigen::VectorXd::Ones(x.size());
    if (recipe.reaction.profile == ForcingProfile::Sine) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            switch (recipe.kind) {
                case ProblemKind::Parabolic1d: p(i) = std::sin(std::numbers::pi * x(i)); break;
                case ProblemKind::TransportPeriodic: p(i) = 0.5 * (1.0 + std::sin(x(i))); break;
                case ProblemKind::ScalarDelay: break;
            }
        }
    }
    return p;
}

Rhs make_rhs(const ProblemRecipe& recipe) {
    const Eigen::VectorXd profile = profile_values(recipe);
    const Reaction reaction = recipe.reaction;
    const double frequency = 2.0 * std::numbers::pi / recipe.period;
    return [profile, reaction, frequency](double t, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) -> Eigen::VectorXd {
        const double phase = std::sin(frequency * t);
        Eigen::VectorXd out(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = reaction(profile(i), phase, x(i), y(i));
        return out;
    };
}

void require_basic(const ProblemRecipe& r) {
    if (!(r.period > 0.0) || !std::isfinite(r.period)) {
        throw std::invalid_argument("recipe: period must be positive and finite");
    }
    if (!(r.delay >= 0.0) || !std::isfinite(r.delay)) {
        throw std::invalid_argument("recipe: delay must be finite and >= 0");
    }
    if (r.time_nodes < 2) throw DimensionError("recipe: need at least 2 time nodes");
}

void require_valid_bracket(const DelayedProblem& p) {
    const BracketCheck lower = verify_lower_solution(p, p.lower());
    if (!lower.ok) {
        throw BracketError("invalid lower solution: slack " + std::to_string(lower.worst_slack) +
                           " at node " + std::to_string(lower.node) + ", component " +
                           std::to_string(lower.component));
    }
    const BracketCheck upper = verify_upper_solution(p, p.upper());
    if (!upper.ok) {
        throw BracketError("invalid upper solution: slack " + std::to_string(upper.worst_slack) +
                           " at node " + std::to_string(upper.node) + ", component " +
                           std::to_string(upper.component));
    }
}

// Assembles the problem for upper = K * shape. With no K given, doubles K
// from 1 until the upper inequality and v0 <= w0 hold.
DelayedProblem assemble(const ProblemRecipe& r, const Eigen::MatrixXd& a,
                        const Eigen::VectorXd& shape, double lower_value) {
    const Eigen::Index n = a.rows();
    const Rhs rhs = make_rhs(r);
    const PeriodicGridFunction lower =
        PeriodicGridFunction::constant(r.period, r.time_nodes, Eigen::VectorXd::Constant(n, lower_value));
    auto with_scale = [&](double k) {
        return DelayedProblem(Generator(a), rhs, r.period, r.delay, lower,
                              PeriodicGridFunction::constant(r.period, r.time_nodes, k * shape),
                              r.constants);
    };
    if (r.upper_scale) {
        DelayedProblem p = with_scale(*r.upper_scale);
        require_valid_bracket(p);
        return p;
    }
    const Generator g(a);
    for (int doubling = 0; doubling <= 40; ++doubling) {
        const double k = std::ldexp(1.0, doubling);
        const PeriodicGridFunction upper = PeriodicGridFunction::constant(r.period, r.time_nodes, k * shape);
        if ((upper.values().array() < lower.values().array()).any()) continue;
        DelayedProblem p(g, rhs, r.period, r.delay, lower, upper, r.constants);
        if (verify_upper_solution(p, p.upper()).ok) {
            require_valid_bracket(p);
            return p;
        }
    }
    throw BracketError("no upper solution of the requested shape found for scale up to 2^40");
}

}  // namespace

DelayedProblem build_parabolic(const ProblemRecipe& r) {
    require_basic(r);
    if (r.kind != ProblemKind::Parabolic1d) throw std::invalid_argument("build_parabolic: wrong kind");
    if (r.spatial_nodes < 2) throw DimensionError("build_parabolic: need at least 2 spatial nodes");
    if (!(r.coefficient > 0.0)) throw std::invalid_argument("build_parabolic: diffusion must be > 0");
    const Eigen::MatrixXd a = dirichlet_laplacian(r.spatial_nodes, r.coefficient);
    const Eigen::VectorXd x = spatial_points(r);
    Eigen::VectorXd shape = Eigen::VectorXd::Ones(r.spatial_nodes);
    if (r.upper_shape.value_or(UpperShape::Torsion) == UpperShape::Torsion) {
        // Solves A psi = 1 exactly: the three-point stencil is exact on quadratics.
        shape = (x.array() * (1.0 - x.array()) / (2.0 * r.coefficient)).matrix();
    }
    return assemble(r, a, shape, r.lower_value.value_or(0.0));
}

DelayedProblem build_transport(const ProblemRecipe& r) {
    require_basic(r);
    if (r.kind != ProblemKind::TransportPeriodic) throw std::invalid_argument("build_transport: wrong kind");
    if (std::abs(r.period - 2.0 * std::numbers::pi) > 1e-12) {
        throw std::invalid_argument("build_transport: the doubly periodic problem has period 2 pi");
    }
    if (r.spatial_nodes < 2) throw DimensionError("build_transport: need at least 2 spatial nodes");
    if (!(r.coefficient > 0.0)) throw std::invalid_argument("build_transport: speed must be > 0");
    if (r.upper_shape.value_or(UpperShape::Constant) != UpperShape::Constant) {
        throw std::invalid_argument("build_transport: only constant upper solutions are supported");
    }
    const Eigen::MatrixXd a = upwind_transport(r.spatial_nodes, r.coefficient);
    return assemble(r, a, Eigen::VectorXd::Ones(r.spatial_nodes), r.lower_value.value_or(0.0));
}

DelayedProblem build_scalar(const ProblemRecipe& r) {
    require_basic(r);
    if (r.kind != ProblemKind::ScalarDelay) throw std::invalid_argument("build_scalar: wrong kind");
    if (r.upper_shape.value_or(UpperShape::Constant) != UpperShape::Constant) {
        throw std::invalid_argument("build_scalar: only constant upper solutions are supported");
    }
    ProblemRecipe recipe = r;
    recipe.spatial_nodes = 1;
    const Reaction& f = r.reaction;
    const double decay = r.coefficient - f.state - f.delayed;
    if (!recipe.upper_scale && f.is_linear() && f.delayed >= 0.0 && decay > 0.0) {
        recipe.upper_scale = (std::abs(f.forcing) + std::abs(f.source) + 1.0) / decay;
    }
    double lower = 0.0;
    if (r.lower_value) {
        lower = *r.lower_value;
    } else if (recipe.upper_scale) {
        lower = -*recipe.upper_scale;
    } else {
        throw BracketError("build_scalar: give lower and upper values for this reaction");
    }
    return assemble(recipe, Eigen::MatrixXd::Constant(1, 1, r.coefficient), Eigen::VectorXd::Ones(1),
                    lower);
}

DelayedProblem build_problem(const ProblemRecipe& recipe) {
    switch (recipe.kind) {
        case ProblemKind::Parabolic1d: return build_parabolic(recipe);
        case ProblemKind::TransportPeriodic: return build_transport(recipe);
        case ProblemKind::ScalarDelay: return build_scalar(recipe);
    }
    throw std::invalid_argument("build_problem: unknown kind");
}

ProblemRecipe scalar_delay_recipe(double a, double k, double c, double tau, double omega,
                                  Eigen::Index time_nodes) {
    if (!(a > 0.0)) throw std::invalid_argument("scalar delay benchmark: need a > 0");
    if (!(k >= 0.0)) throw std::invalid_argument("scalar delay benchmark: need k >= 0");
    if (a <= k) throw BracketError("no constant upper solution exists at this recipe (a <= k)");
    ProblemRecipe r;
    r.kind = ProblemKind::ScalarDelay;
    r.spatial_nodes = 1;
    r.time_nodes = time_nodes;
    r.period = omega;
    r.delay = tau;
    r.coefficient = a;
    r.reaction.delayed = k;
    r.reaction.forcing = c;
    const double bound = (std::abs(c) + 1.0) / (a - k);
    r.upper_scale = bound;
    r.lower_value = -bound;
    return r;
}

DelayedProblem build_scalar_delay(double a, double k, double c, double tau, double omega,
                                  Eigen::Index time_nodes) {
    return build_scalar(scalar_delay_recipe(a, k, c, tau, omega, time_nodes));
}

PeriodicGridFunction timestep_oracle(const DelayedProblem& p, int periods, int substeps) {
    if (periods < 1 || substeps < 1) {
        throw std::invalid_argument("timestep_oracle: periods and substeps must be >= 1");
    }
    const Eigen::Index m = p.nodes();
    const Eigen::Index n = p.dimension();
    const double omega = p.period();
    const long per_period = static_cast<long>(m) * substeps;
    const double dt = omega / static_cast<double>(per_period);

    const Generator g = finalize_shift(p.generator(), p.constants().shift_candidate(),
                                       default_shift_margin(p.generator().growth_exponent()));
    const double shift = g.shift();
    const PhiFunctions phi = phi_functions(-dt * g.shifted_matrix());
    const Eigen::MatrixXd& propagate = phi.exp;
    const Eigen::MatrixXd forcing_weight = dt * phi.phi1;

    // Ring buffer over the last tau / dt steps; earlier times read the history v0.
    const double lag_steps = p.delay() / dt;
    const auto capacity = static_cast<long>(std::ceil(lag_steps)) + 3;
    std::vector<Eigen::VectorXd> ring(static_cast<std::size_t>(capacity));
    auto state = [&](long index) -> Eigen::VectorXd {
        if (index < 0) return p.lower().evaluate(static_cast<double>(index) * dt);
        return ring[static_cast<std::size_t>(index % capacity)];
    };

    const double limit = 1e6 * std::max(1.0, p.upper().sup_norm());
    PeriodicGridFunction last = PeriodicGridFunction::zeros(omega, m, n);
    Eigen::VectorXd u = p.lower().at(0);
    ring[0] = u;
    const long total = per_period * periods;
    for (long k = 0; k < total; ++k) {
        const long in_period = k % per_period;
        if (k >= total - per_period && in_period % substeps == 0) {
            last.at(in_period / substeps) = u;
        }
        const double back = static_cast<double>(k) - lag_steps;
        const double base = std::floor(back);
        const double frac = back - base;
        const auto idx = static_cast<long>(base);
        Eigen::VectorXd delayed = state(idx);
        if (frac > 1e-12) delayed = (1.0 - frac) * delayed + frac * state(idx + 1);

        const double t = static_cast<double>(in_period) * dt;
        const Eigen::VectorXd g_k = p.eval(t, u, delayed) + shift * u;
        u = propagate * u + forcing_weight * g_k;
        if (!u.allFinite() || u.cwiseAbs().maxCoeff() > limit) {
            throw NumericalError("timestep_oracle: trajectory diverged at step " + std::to_string(k));
        }
        ring[static_cast<std::size_t>((k + 1) % capacity)] = u;
    }
    return last;
}

std::optional<PeriodicGridFunction> fourier_oracle(const ProblemRecipe& r, Eigen::Index time_nodes) {
    if (r.kind != ProblemKind::ScalarDelay || !r.reaction.is_linear()) return std::nullopt;
    const Reaction& f = r.reaction;
    const double w = 2.0 * std::numbers::pi / r.period;
    const double mean_decay = r.coefficient - f.state - f.delayed;
    if (mean_decay == 0.0) return std::nullopt;
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> amplitude =
        f.forcing / (i * w + r.coefficient - f.state - f.delayed * std::exp(-i * w * r.delay));
    const double mean = f.source / mean_decay;
    return PeriodicGridFunction::sample(r.period, time_nodes, 1, [&](double t) {
        return Eigen::VectorXd::Constant(1, mean + std::imag(amplitude * std::exp(i * w * t)));
    });
}

std::optional<PeriodicGridFunction> steady_state_oracle(const ProblemRecipe& r, Eigen::Index time_nodes) {
    if (!r.reaction.is_linear() || r.reaction.forcing != 0.0) return std::nullopt;
    Eigen::MatrixXd a;
    switch (r.kind) {
        case ProblemKind::Parabolic1d: a = dirichlet_laplacian(r.spatial_nodes, r.coefficient); break;
        case ProblemKind::TransportPeriodic: a = upwind_transport(r.spatial_nodes, r.coefficient); break;
        case ProblemKind::ScalarDelay: a = Eigen::MatrixXd::Constant(1, 1, r.coefficient); break;
    }
    a.diagonal().array() -= r.reaction.state + r.reaction.delayed;
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(a.rows(), r.reaction.source);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return std::nullopt;
    return PeriodicGridFunction::constant(r.period, time_nodes, lu.solve(rhs));
}

}  // namespace monoper
