#pragma once

#include "monoper/problem.hpp"
#include "monoper/run_config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace monoper {

enum class Verb { Solve, Check, Certify, Oracle, Sweep };

[[nodiscard]] std::string_view to_string(Verb v) noexcept;
[[nodiscard]] Verb parse_verb(std::string_view name);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 1;
/// Hypothesis refuted, invalid lower/upper solution, certificate or
/// oracle bound not met.
inline constexpr int refuted = 2;
inline constexpr int monotonicity_violated = 3;
inline constexpr int max_iter_reached = 4;
}  // namespace exit_code

/// Reference solution on the problem grid and the pointwise error of a
/// solver result against it.
struct OracleComparison {
    OracleKind kind = OracleKind::Auto;
    PeriodicGridFunction reference;
    /// max over nodes and components of |u - reference|
    double max_error = 0.0;
};

/// Resolves OracleKind::Auto to Fourier, then steady state, then the
/// time-stepping oracle, in that order of availability. Throws
/// std::invalid_argument when an explicitly requested oracle does not
/// apply to the recipe.
[[nodiscard]] OracleComparison compare_oracle(const RunConfig& config, const DelayedProblem& p,
                                              const PeriodicGridFunction& solution);

/// Executes one verb and writes its files into config.output_directory.
/// Library errors are reported on `err` and mapped to exit codes.
[[nodiscard]] int run(Verb verb, const RunConfig& config, std::ostream& log, std::ostream& err);

/// Loads the config, applies the output override, then calls run. Parse
/// errors return exit_code::config_error.
[[nodiscard]] int run_file(Verb verb, const std::filesystem::path& config_path,
                           const std::optional<std::filesystem::path>& output_override,
                           std::ostream& log, std::ostream& err);

}  // namespace monoper
