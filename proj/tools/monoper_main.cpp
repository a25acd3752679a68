#include "monoper/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Minimal and maximal periodic solutions of delayed evolution equations "
                 "by monotone iteration"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    bool quiet = false;
    const std::pair<monoper::Verb, const char*> verbs[] = {
        {monoper::Verb::Solve, "run hypothesis checks and the monotone iteration"},
        {monoper::Verb::Check, "verify the bracket and sample the hypotheses only"},
        {monoper::Verb::Certify, "compute the uniqueness certificate kappa"},
        {monoper::Verb::Oracle, "solve and compare against a reference solution"},
        {monoper::Verb::Sweep, "mesh-refinement study over grid.sweep_levels"},
    };
    for (const auto& [verb, help] : verbs) {
        CLI::App* sub = app.add_subcommand(std::string(monoper::to_string(verb)), help);
        sub->add_option("config", config_path, "run configuration (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--output", output_dir, "output directory (overrides the config)")
            ->envname("MONOPER_OUTPUT_DIR");
        sub->add_flag("-q,--quiet", quiet, "suppress the progress log");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : monoper::exit_code::config_error;
    }

    const monoper::Verb verb = monoper::parse_verb(app.get_subcommands().front()->get_name());
    std::ostringstream discard;
    std::ostream& log = quiet ? static_cast<std::ostream&>(discard) : std::cout;
    std::optional<std::filesystem::path> override_dir;
    if (!output_dir.empty()) override_dir = output_dir;
    return monoper::run_file(verb, config_path, override_dir, log, std::cerr);
}
