#include "monoper/run_config.hpp"

#include "monoper/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace monoper {

ConfigError::ConfigError(const std::string& message, int line, std::string key)
    : std::runtime_error(message), line_(line), key_(std::move(key)) {}

std::string_view to_string(OracleKind k) noexcept {
    switch (k) {
        case OracleKind::Auto: return "auto";
        case OracleKind::Fourier: return "fourier";
        case OracleKind::SteadyState: return "steady_state";
        case OracleKind::Timestep: return "timestep";
    }
    return "?";
}

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    double parse() {
        const double value = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return value;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const char* what) const {
        throw std::invalid_argument(std::string(what) + " in '" + std::string(text_) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expression() {
        double value = term();
        for (;;) {
            if (accept('+')) value += term();
            else if (accept('-')) value -= term();
            else return value;
        }
    }

    double term() {
        double value = factor();
        for (;;) {
            if (accept('*')) value *= factor();
            else if (accept('/')) value /= factor();
            else return value;
        }
    }

    double factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        if (accept('(')) {
            const double value = expression();
            if (!accept(')')) fail("missing ')'");
            return value;
        }
        skip_space();
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return std::numbers::pi;
        }
        double value = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        const auto [end, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || end == first) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - first);
        return value;
    }
};

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

class SectionReader {
public:
    SectionReader(const YAML::Node& section, std::string name, std::string source)
        : name_(std::move(name)), source_(std::move(source)) {
        if (section.IsNull()) return;
        if (!section.IsMap()) error(line_of(section), name_, "section must be a mapping");
        for (const auto& entry : section) {
            const std::string key = entry.first.as<std::string>();
            if (entries_.count(key) != 0) error(line_of(entry.first), key, "duplicate key");
            entries_.emplace(key, std::make_pair(entry.first, entry.second));
        }
    }

    /// Rejects keys not in `allowed`.
    void require_known(const std::set<std::string>& allowed) const {
        for (const auto& [key, nodes] : entries_) {
            if (allowed.count(key) == 0) error(line_of(nodes.first), key, "unknown key");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }

    [[nodiscard]] int line(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : line_of(it->second.first);
    }

    [[nodiscard]] std::string text(const std::string& key) const {
        const YAML::Node& node = value(key);
        if (!node.IsScalar()) error(line(key), key, "expected a scalar value");
        return node.Scalar();
    }

    [[nodiscard]] double real(const std::string& key) const {
        const std::string raw = text(key);
        double v = 0.0;
        try {
            v = parse_real_expression(raw);
        } catch (const std::invalid_argument& e) {
            error(line(key), key, e.what());
        }
        if (!std::isfinite(v)) error(line(key), key, "value is not finite");
        return v;
    }

    [[nodiscard]] long long integer(const std::string& key) const {
        const std::string raw = text(key);
        long long v = 0;
        const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc() || end != raw.data() + raw.size()) {
            error(line(key), key, "expected an integer, got '" + raw + "'");
        }
        return v;
    }

    [[nodiscard]] std::vector<std::pair<std::string, int>> list(const std::string& key) const {
        const YAML::Node& node = value(key);
        if (!node.IsSequence()) error(line(key), key, "expected a list");
        std::vector<std::pair<std::string, int>> out;
        for (const auto& item : node) {
            if (!item.IsScalar()) error(line_of(item), key, "list entries must be scalars");
            out.emplace_back(item.Scalar(), line_of(item));
        }
        return out;
    }

    template <typename Enum>
    Enum choice(const std::string& key, const std::vector<std::pair<std::string, Enum>>& options) const {
        const std::string raw = text(key);
        std::string names;
        for (const auto& [name, value] : options) {
            if (raw == name) return value;
            names += names.empty() ? name : ", " + name;
        }
        error(line(key), key, "unknown value '" + raw + "' (expected one of: " + names + ")");
    }

    [[noreturn]] void error(int line, const std::string& key, const std::string& what) const {
        std::ostringstream msg;
        msg << source_ << ':' << line << ": [" << name_ << "] " << key << ": " << what;
        throw ConfigError(msg.str(), line, key);
    }

private:
    [[nodiscard]] const YAML::Node& value(const std::string& key) const {
        return entries_.at(key).second;
    }

    std::string name_;
    std::string source_;
    std::map<std::string, std::pair<YAML::Node, YAML::Node>> entries_;
};

void read_problem(const SectionReader& s, ProblemRecipe& p) {
    s.require_known({"kind", "spatial_nodes", "period", "delay", "coefficient", "source", "forcing",
                     "profile", "state", "delayed", "state_quadratic", "delayed_quadratic", "lower",
                     "upper_scale", "upper_shape"});
    if (!s.has("kind")) s.error(0, "kind", "missing required key");
    if (!s.has("period")) s.error(0, "period", "missing required key");
    p.kind = s.choice<ProblemKind>("kind", {{"parabolic_1d", ProblemKind::Parabolic1d},
                                            {"transport_periodic", ProblemKind::TransportPeriodic},
                                            {"scalar_delay", ProblemKind::ScalarDelay}});
    p.period = s.real("period");
    if (!(p.period > 0.0)) s.error(s.line("period"), "period", "must be > 0");
    if (s.has("spatial_nodes")) {
        const long long n = s.integer("spatial_nodes");
        if (n < 1) s.error(s.line("spatial_nodes"), "spatial_nodes", "must be >= 1");
        p.spatial_nodes = static_cast<Eigen::Index>(n);
    }
    if (s.has("delay")) {
        p.delay = s.real("delay");
        if (p.delay < 0.0) s.error(s.line("delay"), "delay", "must be >= 0");
    }
    if (s.has("coefficient")) p.coefficient = s.real("coefficient");
    Reaction& f = p.reaction;
    const std::vector<std::pair<const char*, double*>> reals = {
        {"source", &f.source},
        {"forcing", &f.forcing},
        {"state", &f.state},
        {"delayed", &f.delayed},
        {"state_quadratic", &f.state_quadratic},
        {"delayed_quadratic", &f.delayed_quadratic},
    };
    for (const auto& [key, target] : reals) {
        if (s.has(key)) *target = s.real(key);
    }
    if (s.has("profile")) {
        f.profile = s.choice<ForcingProfile>("profile", {{"uniform", ForcingProfile::Uniform},
                                                         {"sine", ForcingProfile::Sine}});
    }
    if (s.has("lower")) p.lower_value = s.real("lower");
    if (s.has("upper_scale")) p.upper_scale = s.real("upper_scale");
    if (s.has("upper_shape")) {
        p.upper_shape = s.choice<UpperShape>("upper_shape", {{"constant", UpperShape::Constant},
                                                             {"torsion", UpperShape::Torsion}});
    }
}

void read_grid(const SectionReader& s, GridSettings& g) {
    s.require_known({"nodes", "tolerance", "max_iter", "quadrature", "sweep_levels", "jobs"});
    if (s.has("nodes")) {
        const long long m = s.integer("nodes");
        if (m < 2) s.error(s.line("nodes"), "nodes", "must be >= 2");
        g.nodes = static_cast<Eigen::Index>(m);
    }
    if (s.has("tolerance")) {
        g.tolerance = s.real("tolerance");
        if (!(g.tolerance > 0.0)) s.error(s.line("tolerance"), "tolerance", "must be > 0");
    }
    if (s.has("max_iter")) {
        const long long k = s.integer("max_iter");
        if (k < 1 || k > 1000000) s.error(s.line("max_iter"), "max_iter", "must be in [1, 1e6]");
        g.max_iter = static_cast<int>(k);
    }
    if (s.has("quadrature")) {
        g.quadrature = s.choice<Quadrature>("quadrature", {{"trapezoid", Quadrature::Trapezoid},
                                                           {"exponential", Quadrature::ExponentialTrapezoid}});
    }
    if (s.has("sweep_levels")) {
        for (const auto& [raw, line] : s.list("sweep_levels")) {
            long long m = 0;
            const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), m);
            if (ec != std::errc() || end != raw.data() + raw.size() || m < 2) {
                s.error(line, "sweep_levels", "entries must be integers >= 2, got '" + raw + "'");
            }
            g.sweep_levels.push_back(static_cast<Eigen::Index>(m));
        }
        if (g.sweep_levels.empty()) s.error(s.line("sweep_levels"), "sweep_levels", "must not be empty");
    }
    if (s.has("jobs")) {
        const long long j = s.integer("jobs");
        if (j < 1 || j > 256) s.error(s.line("jobs"), "jobs", "must be in [1, 256]");
        g.jobs = static_cast<int>(j);
    }
}

void read_constants(const SectionReader& s, HypothesisConstants& c, std::optional<double>& margin) {
    s.require_known({"C", "C1", "C2", "C3", "L1", "L2", "N", "shift_margin"});
    if (s.has("C")) c.C = s.real("C");
    if (s.has("N")) c.N = s.real("N");
    const std::vector<std::pair<const char*, std::optional<double>*>> optionals = {
        {"C1", &c.C1}, {"C2", &c.C2}, {"C3", &c.C3}, {"L1", &c.L1}, {"L2", &c.L2}};
    for (const auto& [key, target] : optionals) {
        if (s.has(key)) *target = s.real(key);
    }
    if (s.has("shift_margin")) {
        margin = s.real("shift_margin");
        if (!(*margin > 0.0)) s.error(s.line("shift_margin"), "shift_margin", "must be > 0");
    }
    try {
        c.validate();
    } catch (const ConstantsError& e) {
        s.error(0, "constants", e.what());
    }
}

void read_checks(const SectionReader& s, CheckSettings& c) {
    s.require_known({"list", "seed", "samples", "probes", "oracle", "oracle_bound", "oracle_periods",
                     "oracle_substeps"});
    if (s.has("list")) {
        c.h1 = c.h3h4h5 = c.certificate = c.oracle = c.extremality = false;
        const std::map<std::string, bool*> flags = {{"h1", &c.h1},
                                                    {"h3h4h5", &c.h3h4h5},
                                                    {"certificate", &c.certificate},
                                                    {"oracle", &c.oracle},
                                                    {"extremality", &c.extremality}};
        for (const auto& [name, line] : s.list("list")) {
            const auto it = flags.find(name);
            if (it == flags.end()) s.error(line, "list", "unknown check '" + name + "'");
            *it->second = true;
        }
    }
    if (s.has("seed")) {
        const long long seed = s.integer("seed");
        if (seed < 0) s.error(s.line("seed"), "seed", "must be >= 0");
        c.seed = static_cast<std::uint64_t>(seed);
    }
    auto positive_int = [&](const char* key, int& target) {
        if (!s.has(key)) return;
        const long long v = s.integer(key);
        if (v < 1 || v > 100000000) s.error(s.line(key), key, "must be a positive integer");
        target = static_cast<int>(v);
    };
    positive_int("samples", c.samples);
    positive_int("probes", c.probes);
    positive_int("oracle_periods", c.oracle_periods);
    positive_int("oracle_substeps", c.oracle_substeps);
    if (s.has("oracle")) {
        c.oracle_kind = s.choice<OracleKind>("oracle", {{"auto", OracleKind::Auto},
                                                        {"fourier", OracleKind::Fourier},
                                                        {"steady_state", OracleKind::SteadyState},
                                                        {"timestep", OracleKind::Timestep}});
    }
    if (s.has("oracle_bound")) {
        c.oracle_bound = s.real("oracle_bound");
        if (!(c.oracle_bound > 0.0)) s.error(s.line("oracle_bound"), "oracle_bound", "must be > 0");
    }
}

}  // namespace

double parse_real_expression(std::string_view text) { return ExpressionParser(text).parse(); }

RunConfig parse_config(std::string_view text, std::string_view source) {
    const std::string label(source);
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        const int line = e.mark.line + 1;
        throw ConfigError(label + ':' + std::to_string(line) + ": " + e.msg, line, "");
    }
    if (!root.IsMap()) throw ConfigError(label + ": expected sections problem, grid, ...", 1, "");

    std::map<std::string, YAML::Node> sections;
    for (const auto& entry : root) {
        const std::string name = entry.first.as<std::string>();
        const int line = line_of(entry.first);
        static const std::set<std::string> known = {"problem", "grid", "constants", "checks", "output"};
        if (known.count(name) == 0) {
            throw ConfigError(label + ':' + std::to_string(line) + ": unknown section '" + name + "'",
                              line, name);
        }
        if (sections.count(name) != 0) {
            throw ConfigError(label + ':' + std::to_string(line) + ": duplicate section '" + name + "'",
                              line, name);
        }
        sections.emplace(name, entry.second);
    }
    if (sections.count("problem") == 0) throw ConfigError(label + ": missing section 'problem'", 0, "problem");

    RunConfig config;
    read_problem(SectionReader(sections.at("problem"), "problem", label), config.problem);
    if (sections.count("grid") != 0) read_grid(SectionReader(sections.at("grid"), "grid", label), config.grid);
    if (sections.count("constants") != 0) {
        read_constants(SectionReader(sections.at("constants"), "constants", label), config.problem.constants,
                       config.shift_margin);
    }
    if (sections.count("checks") != 0) {
        read_checks(SectionReader(sections.at("checks"), "checks", label), config.checks);
    }
    if (sections.count("output") != 0) {
        const SectionReader out(sections.at("output"), "output", label);
        out.require_known({"directory"});
        if (out.has("directory")) config.output_directory = out.text("directory");
    }
    config.problem.time_nodes = config.grid.nodes;
    if (config.grid.sweep_levels.empty()) {
        for (const Eigen::Index m : {config.grid.nodes / 4, config.grid.nodes / 2, config.grid.nodes}) {
            if (m >= 2) config.grid.sweep_levels.push_back(m);
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file", 0, "");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

}  // namespace monoper
