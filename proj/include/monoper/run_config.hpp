#pragma once

#include "monoper/periodic_operator.hpp"
#include "monoper/problems.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace monoper {

/// Rejected configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line, std::string key);
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

enum class OracleKind { Auto, Fourier, SteadyState, Timestep };

[[nodiscard]] std::string_view to_string(OracleKind k) noexcept;

struct GridSettings {
    Eigen::Index nodes = 64;
    double tolerance = 1e-8;
    int max_iter = 500;
    Quadrature quadrature = Quadrature::ExponentialTrapezoid;
    /// Node counts of the sweep verb; defaults to {nodes/4, nodes/2, nodes}.
    std::vector<Eigen::Index> sweep_levels;
    int jobs = 1;
};

struct CheckSettings {
    bool h1 = true;
    bool h3h4h5 = true;
    bool certificate = false;
    bool oracle = false;
    bool extremality = false;
    std::uint64_t seed = 20240501;
    int samples = 2000;
    int probes = 4;
    OracleKind oracle_kind = OracleKind::Auto;
    double oracle_bound = 1e-3;
    int oracle_periods = 50;
    int oracle_substeps = 10;
};

struct RunConfig {
    ProblemRecipe problem;
    GridSettings grid;
    std::optional<double> shift_margin;
    CheckSettings checks;
    std::filesystem::path output_directory = "monoper-out";
};

/// Evaluates a real literal or a small arithmetic expression over numbers
/// and `pi` (+ - * / and parentheses), e.g. "2*pi" or "pi / 2".
/// Throws std::invalid_argument on malformed input.
[[nodiscard]] double parse_real_expression(std::string_view text);

/// Parses YAML text with top-level sections problem, grid, constants,
/// checks and output. Unknown sections or keys, duplicate keys and values
/// of the wrong type are rejected with a ConfigError naming the line and
/// key. `source` labels diagnostics.
[[nodiscard]] RunConfig parse_config(std::string_view text, std::string_view source = "config");
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

}  // namespace monoper
