#include "monoper/monotone_solver.hpp"

#include "monoper/errors.hpp"
#include "monoper/ordered_space.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <string>

namespace monoper {

std::string_view to_string(IterationStatus s) noexcept {
    switch (s) {
        case IterationStatus::ExtremalPair: return "extremal_pair";
        case IterationStatus::UniqueSolution: return "unique_solution";
        case IterationStatus::MonotonicityViolated: return "monotonicity_violated";
        case IterationStatus::MaxIterReached: return "max_iter_reached";
    }
    return "unknown";
}

PeriodicOperator make_operator(const DelayedProblem& p, Quadrature quadrature,
                               std::optional<double> margin) {
    const double candidate = p.constants().shift_candidate();
    const double nu0 = p.generator().growth_exponent();
    Generator g = finalize_shift(p.generator(), candidate, margin.value_or(default_shift_margin(nu0)));
    return PeriodicOperator(std::move(g), p.period(), p.nodes(), quadrature);
}

PeriodicGridFunction eval_F_shifted(const DelayedProblem& p, const PeriodicGridFunction& u,
                                    double shift) {
    require_same_grid(u, p.lower(), "eval_F_shifted");
    const PeriodicGridFunction delayed = u.lagged(p.delay());
    PeriodicGridFunction out = PeriodicGridFunction::zeros(u.period(), u.nodes(), u.dimension());
    Eigen::VectorXd x(u.dimension());
    Eigen::VectorXd y(u.dimension());
    for (Eigen::Index j = 0; j < u.nodes(); ++j) {
        x = u.at(j);
        y = delayed.at(j);
        out.at(j) = p.eval(u.time(j), x, y) + shift * x;
    }
    return out;
}

namespace {

double bracket_slack(const DelayedProblem& p) { return 1e-9 * (1.0 + p.upper().sup_norm()); }

}  // namespace

PeriodicGridFunction apply_Q(const DelayedProblem& p, const PeriodicOperator& op,
                             const PeriodicGridFunction& u) {
    if (!in_order_interval(u, p.lower(), p.upper(), bracket_slack(p))) {
        std::clog << "warning: apply_Q argument leaves the bracket [v0, w0]\n";
    }
    return apply_P(op, eval_F_shifted(p, u, op.generator().shift()));
}

namespace {

// Node-by-node slack of F - (u' + A u); central difference for u'.
Eigen::MatrixXd differential_slack(const DelayedProblem& p, const PeriodicGridFunction& u) {
    require_same_grid(u, p.lower(), "verify solution");
    const PeriodicGridFunction delayed = u.lagged(p.delay());
    const double dt = u.step();
    Eigen::MatrixXd slack(u.dimension(), u.nodes());
    Eigen::VectorXd x(u.dimension());
    Eigen::VectorXd y(u.dimension());
    for (Eigen::Index j = 0; j < u.nodes(); ++j) {
        x = u.at(j);
        y = delayed.at(j);
        const Eigen::VectorXd derivative = (u.at(j + 1) - u.at(j - 1)) / (2.0 * dt);
        slack.col(j) = p.eval(u.time(j), x, y) - derivative - p.generator().matrix() * x;
    }
    return slack;
}

BracketCheck summarize(const Eigen::MatrixXd& slack, double tol) {
    BracketCheck out;
    out.worst_slack = slack.minCoeff(&out.component, &out.node);
    out.ok = out.worst_slack >= -tol;
    return out;
}

}  // namespace

BracketCheck verify_lower_solution(const DelayedProblem& p, const PeriodicGridFunction& v,
                                   double tol) {
    return summarize(differential_slack(p, v), tol);
}

BracketCheck verify_upper_solution(const DelayedProblem& p, const PeriodicGridFunction& w,
                                   double tol) {
    return summarize(-differential_slack(p, w), tol);
}

namespace {

struct OrderSlack {
    double amount = std::numeric_limits<double>::infinity();
    Eigen::Index node = 0;
    Eigen::Index component = 0;
    const char* inequality = "";

    void consider(const Eigen::MatrixXd& difference, const char* name) {
        Eigen::Index r = 0;
        Eigen::Index c = 0;
        const double v = difference.minCoeff(&r, &c);
        if (v < amount) {
            amount = v;
            node = c;
            component = r;
            inequality = name;
        }
    }
};

OrderSlack sandwich_slack(const DelayedProblem& p, const PeriodicGridFunction& v_prev,
                          const PeriodicGridFunction& v_next, const PeriodicGridFunction& w_prev,
                          const PeriodicGridFunction& w_next) {
    OrderSlack s;
    s.consider(v_next.values() - v_prev.values(), "v_{i-1} <= v_i");
    s.consider(w_next.values() - v_next.values(), "v_i <= w_i");
    s.consider(w_prev.values() - w_next.values(), "w_i <= w_{i-1}");
    s.consider(v_next.values() - p.lower().values(), "v_0 <= v_i");
    s.consider(p.upper().values() - w_next.values(), "w_i <= w_0");
    return s;
}

double distance(const PeriodicGridFunction& a, const PeriodicGridFunction& b) {
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace

IterationReport iterate(const DelayedProblem& p, const PeriodicOperator& op,
                        const IterationOptions& options) {
    if (!(options.tolerance > 0.0) || options.max_iter < 1) {
        throw std::invalid_argument("iterate: need tolerance > 0 and max_iter >= 1");
    }
    op.require_compatible(p.lower(), "iterate");
    const BracketCheck lower_ok = verify_lower_solution(p, p.lower());
    if (!lower_ok.ok) {
        throw BracketError("invalid lower solution: slack " + std::to_string(lower_ok.worst_slack) +
                           " at node " + std::to_string(lower_ok.node) + ", component " +
                           std::to_string(lower_ok.component));
    }
    const BracketCheck upper_ok = verify_upper_solution(p, p.upper());
    if (!upper_ok.ok) {
        throw BracketError("invalid upper solution: slack " + std::to_string(upper_ok.worst_slack) +
                           " at node " + std::to_string(upper_ok.node) + ", component " +
                           std::to_string(upper_ok.component));
    }

    IterationReport report;
    report.slack = options.slack_scale * (1.0 + p.upper().sup_norm());
    PeriodicGridFunction v = p.lower();
    PeriodicGridFunction w = p.upper();
    report.gaps.push_back(distance(w, v));
    if (options.keep_iterates) {
        report.lower_iterates.push_back(v);
        report.upper_iterates.push_back(w);
    }

    bool converged = false;
    for (int i = 1; i <= options.max_iter; ++i) {
        PeriodicGridFunction v_next = apply_Q(p, op, v);
        PeriodicGridFunction w_next = apply_Q(p, op, w);
        report.iterations = i;

        const OrderSlack order = sandwich_slack(p, v, v_next, w, w_next);
        report.monotone_slack.push_back(order.amount);
        report.lower_steps.push_back(distance(v_next, v));
        report.upper_steps.push_back(distance(w_next, w));
        const double gap = distance(w_next, v_next);
        const double previous_gap = report.gaps.back();
        report.gaps.push_back(gap);
        report.contraction_ratios.push_back(previous_gap > 0.0 ? gap / previous_gap : 0.0);

        v = std::move(v_next);
        w = std::move(w_next);
        if (options.keep_iterates) {
            report.lower_iterates.push_back(v);
            report.upper_iterates.push_back(w);
        }

        if (order.amount < -report.slack) {
            report.status = IterationStatus::MonotonicityViolated;
            report.violation = MonotonicityViolation{i, order.node, order.component, order.inequality,
                                                     -order.amount};
            return report;
        }
        // Small steps alone do not separate a slowly closing gap from a
        // settled extremal pair, so keep going while the gap still shrinks.
        const bool settled = gap <= options.tolerance || previous_gap - gap <= options.tolerance;
        if (std::max(report.lower_steps.back(), report.upper_steps.back()) <= options.tolerance && settled) {
            report.status = gap <= options.tolerance ? IterationStatus::UniqueSolution
                                                     : IterationStatus::ExtremalPair;
            converged = true;
            break;
        }
    }
    if (!converged) report.status = IterationStatus::MaxIterReached;

    const double shift = op.generator().shift();
    const PeriodicGridFunction fv = eval_F_shifted(p, v, shift);
    const PeriodicGridFunction fw = eval_F_shifted(p, w, shift);
    report.lower_fixed_point_residual = distance(apply_P(op, fv), v);
    report.upper_fixed_point_residual = distance(apply_P(op, fw), w);
    report.lower_mild_residual = mild_residual(op, v, fv);
    report.upper_mild_residual = mild_residual(op, w, fw);
    if (converged) {
        report.minimal = v;
        report.maximal = w;
    }
    return report;
}

Certificate uniqueness_certificate(const DelayedProblem& p, const PeriodicOperator& op) {
    const HypothesisConstants& k = p.constants();
    k.validate();
    if (!k.L1 || !k.L2) throw ConstantsError("uniqueness certificate needs L1 and L2");
    if (*k.L2 > 0.0 && !k.C1) throw ConstantsError("uniqueness certificate needs C1 when L2 > 0");

    Certificate cert;
    // The shift actually used by Q; it is >= the hypothesis constant and
    // exceeds it only when extra shift was needed for stability.
    cert.shift = std::max(k.shift_candidate(), op.generator().shift());
    cert.lipschitz_factor = *k.L1 + cert.shift + *k.L2 * k.C1.value_or(0.0);
    cert.resolvent_norm = op.resolvent_norm();
    cert.sup_norm = sup_norm_bound(op.generator(), op.period(), static_cast<int>(op.nodes()));
    cert.kappa = k.N * cert.lipschitz_factor * cert.resolvent_norm * cert.sup_norm * op.period();
    cert.certified = cert.kappa < 1.0;
    return cert;
}

ExtremalityResult extremality_check(const DelayedProblem& p, const PeriodicOperator& op,
                                    const IterationReport& report, int probes, std::uint64_t seed,
                                    const IterationOptions& options) {
    if (!report.converged() || !report.minimal || !report.maximal) {
        throw std::invalid_argument("extremality_check: report has no extremal pair");
    }
    const PeriodicGridFunction& lo = p.lower();
    const PeriodicGridFunction& hi = p.upper();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ExtremalityResult out;
    const double allowance = report.slack + 10.0 * options.tolerance;
    for (int k = 0; k < probes; ++k) {
        PeriodicGridFunction u = lo;
        if (k == 1) {
            u = 0.5 * (lo + hi);
        } else if (k >= 2) {
            for (Eigen::Index j = 0; j < u.nodes(); ++j) {
                for (Eigen::Index c = 0; c < u.dimension(); ++c) {
                    u.values()(c, j) += unit(rng) * (hi.values()(c, j) - lo.values()(c, j));
                }
            }
        }
        const int min_steps = std::max(1, report.iterations);
        for (int step = 1; step <= std::max(options.max_iter, min_steps); ++step) {
            PeriodicGridFunction next = apply_Q(p, op, u);
            const double moved = distance(next, u);
            u = std::move(next);
            if (step >= min_steps && moved <= options.tolerance) break;
        }
        const double below = (report.minimal->values() - u.values()).maxCoeff();
        const double above = (u.values() - report.maximal->values()).maxCoeff();
        out.worst_excess = std::max({out.worst_excess, below, above});
        ++out.probes;
    }
    out.ok = out.worst_excess <= allowance;
    return out;
}

}  // namespace monoper
