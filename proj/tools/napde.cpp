#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "napde/presets.hpp"
#include "napde/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> levels;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "path to a run configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory for CSV and summary files");
    cmd->add_option("--seed", opts.seed, "seed for the randomized suites");
    cmd->add_option("--levels", opts.levels, "number of refinement levels");
}

int execute(const CommonOpts& opts, std::optional<napde::Suite> forced_suite) {
    napde::Config cfg;
    if (!opts.config_path.empty()) cfg = napde::load_config(opts.config_path);
    if (forced_suite) cfg.suite = *forced_suite;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.levels) {
        if (*opts.levels < 3) throw napde::SemanticError("levels must be >= 3");
        cfg.levels = *opts.levels;
    }
    const napde::cli::RunResult result = napde::cli::run(cfg);
    std::cout << result.summary;
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver and verification workbench for 1-d parabolic systems"};
    app.require_subcommand(1);

    CommonOpts opts;
    CLI::App* cmd_run = app.add_subcommand("run", "execute the suite selected by the config");
    CLI::App* cmd_verify = app.add_subcommand("verify", "assumption and form checks");
    CLI::App* cmd_converge = app.add_subcommand("converge", "manufactured-solution study");
    CLI::App* cmd_opcheck = app.add_subcommand("opcheck", "operator identity checks");
    CLI::App* cmd_presets = app.add_subcommand("presets", "list available presets");
    for (CLI::App* cmd : {cmd_run, cmd_verify, cmd_converge, cmd_opcheck})
        add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_presets->parsed()) {
            for (const std::string& name : napde::preset_names())
                std::cout << name << "\n";
            return 0;
        }
        std::optional<napde::Suite> forced;
        if (cmd_verify->parsed()) forced = napde::Suite::Verify;
        else if (cmd_converge->parsed()) forced = napde::Suite::Converge;
        else if (cmd_opcheck->parsed()) forced = napde::Suite::Opcheck;
        return execute(opts, forced);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
