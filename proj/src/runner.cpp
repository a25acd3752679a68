#include "monoper/runner.hpp"

#include "monoper/errors.hpp"
#include "monoper/hypotheses.hpp"
#include "monoper/monotone_solver.hpp"
#include "monoper/problems.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

namespace monoper {

using nlohmann::json;

std::string_view to_string(Verb v) noexcept {
    switch (v) {
        case Verb::Solve: return "solve";
        case Verb::Check: return "check";
        case Verb::Certify: return "certify";
        case Verb::Oracle: return "oracle";
        case Verb::Sweep: return "sweep";
    }
    return "?";
}

Verb parse_verb(std::string_view name) {
    for (const Verb v : {Verb::Solve, Verb::Check, Verb::Certify, Verb::Oracle, Verb::Sweep}) {
        if (name == to_string(v)) return v;
    }
    throw std::invalid_argument("unknown verb '" + std::string(name) + "'");
}

namespace {

std::string fmt17(double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

json vector_json(const Eigen::VectorXd& x) { return json(std::vector<double>(x.data(), x.data() + x.size())); }

json hypothesis_json(const HypothesisResult& r) {
    json j = {{"ok", r.ok}, {"samples", r.samples}};
    if (r.witness) {
        const Witness& w = *r.witness;
        j["witness"] = {{"node", w.node},         {"time", w.time},       {"component", w.component},
                        {"x1", vector_json(w.x1)}, {"x2", vector_json(w.x2)}, {"y1", vector_json(w.y1)},
                        {"y2", vector_json(w.y2)}, {"violation", w.violation}};
    }
    return j;
}

json certificate_json(const Certificate& c) {
    return {{"kappa", c.kappa},
            {"certified", c.certified},
            {"shift", c.shift},
            {"resolvent_norm", c.resolvent_norm},
            {"sup_norm", c.sup_norm},
            {"lipschitz_factor", c.lipschitz_factor}};
}

json problem_json(const RunConfig& c) {
    const ProblemRecipe& p = c.problem;
    return {{"kind", to_string(p.kind)},
            {"spatial_nodes", p.spatial_nodes},
            {"time_nodes", p.time_nodes},
            {"period", p.period},
            {"delay", p.delay},
            {"coefficient", p.coefficient},
            {"quadrature", to_string(c.grid.quadrature)}};
}

IterationOptions iteration_options(const RunConfig& c, bool keep_iterates) {
    IterationOptions o;
    o.tolerance = c.grid.tolerance;
    o.max_iter = c.grid.max_iter;
    o.keep_iterates = keep_iterates;
    return o;
}

int status_exit_code(IterationStatus s) {
    switch (s) {
        case IterationStatus::ExtremalPair:
        case IterationStatus::UniqueSolution: return exit_code::ok;
        case IterationStatus::MonotonicityViolated: return exit_code::monotonicity_violated;
        case IterationStatus::MaxIterReached: return exit_code::max_iter_reached;
    }
    return exit_code::config_error;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_iterates(const std::filesystem::path& path, const IterationReport& r) {
    std::ofstream out = open_output(path);
    out << "step,node,time,component,v,w\n";
    const std::size_t steps = std::min(r.lower_iterates.size(), r.upper_iterates.size());
    for (std::size_t i = 0; i < steps; ++i) {
        const PeriodicGridFunction& v = r.lower_iterates[i];
        const PeriodicGridFunction& w = r.upper_iterates[i];
        for (Eigen::Index j = 0; j < v.nodes(); ++j) {
            const std::string time = fmt17(v.time(j));
            for (Eigen::Index c = 0; c < v.dimension(); ++c) {
                out << i << ',' << j << ',' << time << ',' << c << ',' << fmt17(v.values()(c, j)) << ','
                    << fmt17(w.values()(c, j)) << '\n';
            }
        }
    }
}

void write_convergence(const std::filesystem::path& path, const IterationReport& r,
                       std::optional<double> kappa) {
    std::ofstream out = open_output(path);
    out << "step,gap,lower_step,upper_step,ratio,kappa\n";
    const std::string k = kappa ? fmt17(*kappa) : "";
    for (std::size_t i = 0; i < r.gaps.size(); ++i) {
        out << i << ',' << fmt17(r.gaps[i]);
        if (i == 0) {
            out << ",,,";
        } else {
            out << ',' << fmt17(r.lower_steps[i - 1]) << ',' << fmt17(r.upper_steps[i - 1]) << ','
                << fmt17(r.contraction_ratios[i - 1]);
        }
        out << ',' << k << '\n';
    }
}

void write_oracle(const std::filesystem::path& path, const PeriodicGridFunction& solution,
                  const OracleComparison& o) {
    std::ofstream out = open_output(path);
    out << "node,time,component,solver,oracle,error\n";
    for (Eigen::Index j = 0; j < solution.nodes(); ++j) {
        for (Eigen::Index c = 0; c < solution.dimension(); ++c) {
            const double u = solution.values()(c, j);
            const double ref = o.reference.values()(c, j);
            out << j << ',' << fmt17(solution.time(j)) << ',' << c << ',' << fmt17(u) << ',' << fmt17(ref)
                << ',' << fmt17(std::abs(u - ref)) << '\n';
        }
    }
}

void write_report(const std::filesystem::path& path, const json& report) {
    std::ofstream out = open_output(path);
    out << report.dump(2) << '\n';
}

/// Runs the enabled hypothesis checks into report["hypotheses"]; true when
/// none was refuted.
bool run_hypothesis_checks(const RunConfig& c, const DelayedProblem& p, json& report, std::ostream& log) {
    json h = json::object();
    bool ok = true;
    if (c.checks.h1) {
        const HypothesisResult r = check_H1(p, c.checks.samples, c.checks.seed);
        h["H1"] = hypothesis_json(r);
        ok = ok && r.ok;
        log << "H1: " << (r.ok ? "not refuted" : "refuted") << " (" << r.samples << " samples)\n";
    }
    if (c.checks.h3h4h5) {
        const H345Result r = check_H3_H4_H5(p, c.checks.samples, c.checks.seed);
        const std::pair<const char*, const std::optional<HypothesisResult>*> parts[] = {
            {"H3", &r.h3}, {"H4", &r.h4}, {"H5", &r.h5}};
        for (const auto& [name, result] : parts) {
            if (!*result) continue;
            h[name] = hypothesis_json(**result);
            log << name << ": " << ((*result)->ok ? "not refuted" : "refuted") << '\n';
        }
        if (r.derived_C) h["derived_C"] = *r.derived_C;
        ok = ok && r.ok();
    }
    report["hypotheses"] = h;
    return ok;
}

IterationReport run_iteration(const RunConfig& c, const DelayedProblem& p, const PeriodicOperator& op,
                              bool keep_iterates, json& report, std::ostream& log) {
    IterationReport r = iterate(p, op, iteration_options(c, keep_iterates));
    report["status"] = to_string(r.status);
    report["iterations"] = r.iterations;
    report["shift"] = op.generator().shift();
    report["slack"] = r.slack;
    report["final_gap"] = r.gaps.back();
    report["residuals"] = {{"lower_fixed_point", r.lower_fixed_point_residual},
                           {"upper_fixed_point", r.upper_fixed_point_residual},
                           {"lower_mild", r.lower_mild_residual},
                           {"upper_mild", r.upper_mild_residual}};
    if (r.violation) {
        report["violation"] = {{"step", r.violation->step},
                               {"node", r.violation->node},
                               {"component", r.violation->component},
                               {"inequality", r.violation->inequality},
                               {"amount", r.violation->amount}};
    }
    log << "status " << to_string(r.status) << " after " << r.iterations << " iterations, gap "
        << fmt17(r.gaps.back()) << '\n';
    return r;
}

/// max(|v - ref|, |w - ref|) over the extremal pair.
OracleComparison oracle_for_report(const RunConfig& c, const DelayedProblem& p, const IterationReport& r) {
    OracleComparison lower = compare_oracle(c, p, *r.minimal);
    const double upper_error = (r.maximal->values() - lower.reference.values()).cwiseAbs().maxCoeff();
    lower.max_error = std::max(lower.max_error, upper_error);
    return lower;
}

int solve_like(Verb verb, const RunConfig& c, std::ostream& log) {
    const auto& dir = c.output_directory;
    json report = {{"verb", to_string(verb)}, {"problem", problem_json(c)}, {"seed", c.checks.seed}};
    const DelayedProblem p = build_problem(c.problem);
    const PeriodicOperator op = make_operator(p, c.grid.quadrature, c.shift_margin);

    if (!run_hypothesis_checks(c, p, report, log)) {
        report["status"] = "hypothesis_refuted";
        report["exit_code"] = exit_code::refuted;
        write_report(dir / "report.json", report);
        return exit_code::refuted;
    }

    std::optional<Certificate> cert;
    if (c.checks.certificate || verb == Verb::Certify) {
        cert = uniqueness_certificate(p, op);
        report["certificate"] = certificate_json(*cert);
        log << "kappa " << fmt17(cert->kappa) << (cert->certified ? " (certified)" : " (not certified)") << '\n';
    }
    if (verb == Verb::Certify) {
        const int code = cert->certified ? exit_code::ok : exit_code::refuted;
        report["exit_code"] = code;
        write_report(dir / "report.json", report);
        return code;
    }

    const IterationReport r = run_iteration(c, p, op, true, report, log);
    write_iterates(dir / "iterates.csv", r);
    write_convergence(dir / "convergence.csv", r,
                      cert ? std::optional<double>(cert->kappa) : std::nullopt);
    int code = status_exit_code(r.status);

    if (r.converged() && c.checks.extremality) {
        const ExtremalityResult e =
            extremality_check(p, op, r, c.checks.probes, c.checks.seed, iteration_options(c, false));
        report["extremality"] = {{"ok", e.ok}, {"probes", e.probes}, {"worst_excess", e.worst_excess}};
        log << "extremality: " << (e.ok ? "ok" : "FAILED") << '\n';
        if (!e.ok) code = exit_code::refuted;
    }
    if (r.converged() && (c.checks.oracle || verb == Verb::Oracle)) {
        const OracleComparison o = oracle_for_report(c, p, r);
        const bool within = o.max_error <= c.checks.oracle_bound;
        report["oracle"] = {{"kind", to_string(o.kind)},
                            {"max_error", o.max_error},
                            {"bound", c.checks.oracle_bound},
                            {"ok", within}};
        write_oracle(dir / "oracle.csv", *r.minimal, o);
        log << "oracle " << to_string(o.kind) << " max error " << fmt17(o.max_error) << " (bound "
            << fmt17(c.checks.oracle_bound) << ")\n";
        if (!within && code == exit_code::ok) code = exit_code::refuted;
    }
    report["exit_code"] = code;
    write_report(dir / "report.json", report);
    return code;
}

int check_only(const RunConfig& c, std::ostream& log) {
    json report = {{"verb", "check"}, {"problem", problem_json(c)}, {"seed", c.checks.seed}};
    const DelayedProblem p = build_problem(c.problem);
    report["bracket"] = "valid";
    const bool ok = run_hypothesis_checks(c, p, report, log);
    const int code = ok ? exit_code::ok : exit_code::refuted;
    report["status"] = ok ? "not_refuted" : "hypothesis_refuted";
    report["exit_code"] = code;
    write_report(c.output_directory / "report.json", report);
    return code;
}

struct SweepRow {
    Eigen::Index nodes = 0;
    IterationStatus status = IterationStatus::MaxIterReached;
    int iterations = 0;
    std::optional<double> error;
    OracleKind oracle = OracleKind::Auto;
};

SweepRow sweep_level(const RunConfig& base, Eigen::Index nodes) {
    RunConfig c = base;
    c.grid.nodes = nodes;
    c.problem.time_nodes = nodes;
    const DelayedProblem p = build_problem(c.problem);
    const PeriodicOperator op = make_operator(p, c.grid.quadrature, c.shift_margin);
    const IterationReport r = iterate(p, op, iteration_options(c, false));
    SweepRow row{nodes, r.status, r.iterations, std::nullopt, OracleKind::Auto};
    if (r.converged()) {
        const OracleComparison o = oracle_for_report(c, p, r);
        row.error = o.max_error;
        row.oracle = o.kind;
    }
    return row;
}

int sweep(const RunConfig& c, std::ostream& log) {
    const auto& levels = c.grid.sweep_levels;
    std::vector<std::optional<SweepRow>> rows(levels.size());
    std::vector<std::exception_ptr> failures(levels.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < levels.size(); i = next++) {
            try {
                rows[i] = sweep_level(c, levels[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(c.grid.jobs), levels.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::ofstream out = open_output(c.output_directory / "sweep.csv");
    out << "nodes,status,iterations,oracle,max_error,observed_order\n";
    json table = json::array();
    int code = exit_code::ok;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& row = *rows[i];
        std::optional<double> order;
        if (i > 0 && row.error && rows[i - 1]->error && *row.error > 0.0 && *rows[i - 1]->error > 0.0) {
            order = std::log(*rows[i - 1]->error / *row.error) /
                    std::log(static_cast<double>(row.nodes) / static_cast<double>(rows[i - 1]->nodes));
        }
        out << row.nodes << ',' << to_string(row.status) << ',' << row.iterations << ','
            << (row.error ? to_string(row.oracle) : "") << ',' << (row.error ? fmt17(*row.error) : "") << ','
            << (order ? fmt17(*order) : "") << '\n';
        json entry = {{"nodes", row.nodes}, {"status", to_string(row.status)}, {"iterations", row.iterations}};
        if (row.error) entry["max_error"] = *row.error;
        if (order) entry["observed_order"] = *order;
        table.push_back(entry);
        log << "m=" << row.nodes << ' ' << to_string(row.status)
            << (row.error ? " error " + fmt17(*row.error) : std::string()) << '\n';
        if (code == exit_code::ok) code = status_exit_code(row.status);
    }
    json report = {{"verb", "sweep"}, {"problem", problem_json(c)}, {"levels", table}, {"exit_code", code}};
    write_report(c.output_directory / "report.json", report);
    return code;
}

}  // namespace

OracleComparison compare_oracle(const RunConfig& config, const DelayedProblem& p,
                                const PeriodicGridFunction& solution) {
    const Eigen::Index m = solution.nodes();
    ProblemRecipe recipe = config.problem;
    recipe.time_nodes = m;
    const OracleKind wanted = config.checks.oracle_kind;
    std::optional<PeriodicGridFunction> reference;
    OracleKind used = wanted;
    if (wanted == OracleKind::Auto || wanted == OracleKind::Fourier) {
        reference = fourier_oracle(recipe, m);
        used = OracleKind::Fourier;
    }
    if (!reference && (wanted == OracleKind::Auto || wanted == OracleKind::SteadyState)) {
        reference = steady_state_oracle(recipe, m);
        used = OracleKind::SteadyState;
    }
    if (!reference && (wanted == OracleKind::Auto || wanted == OracleKind::Timestep)) {
        reference = timestep_oracle(p, config.checks.oracle_periods, config.checks.oracle_substeps);
        used = OracleKind::Timestep;
    }
    if (!reference) {
        throw std::invalid_argument("oracle '" + std::string(to_string(wanted)) +
                                    "' does not apply to this problem");
    }
    require_same_grid(solution, *reference, "compare_oracle");
    const double error = (solution.values() - reference->values()).cwiseAbs().maxCoeff();
    return OracleComparison{used, std::move(*reference), error};
}

int run(Verb verb, const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        std::filesystem::create_directories(config.output_directory);
        switch (verb) {
            case Verb::Check: return check_only(config, log);
            case Verb::Sweep: return sweep(config, log);
            case Verb::Solve:
            case Verb::Certify:
            case Verb::Oracle: return solve_like(verb, config, log);
        }
    } catch (const BracketError& e) {
        err << "error: " << e.what() << '\n';
        json report = {{"verb", to_string(verb)}, {"status", "invalid_bracket"}, {"error", e.what()},
                       {"exit_code", exit_code::refuted}};
        try {
            write_report(config.output_directory / "report.json", report);
        } catch (const std::exception&) {
        }
        return exit_code::refuted;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config_error;
    }
    return exit_code::config_error;
}

int run_file(Verb verb, const std::filesystem::path& config_path,
             const std::optional<std::filesystem::path>& output_override, std::ostream& log,
             std::ostream& err) {
    RunConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config_error;
    }
    if (output_override) config.output_directory = *output_override;
    return run(verb, config, log, err);
}

}  // namespace monoper
