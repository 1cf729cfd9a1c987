#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdlpt/commands.hpp"

using namespace tdlpt;

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> settings;
    std::string output_dir;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
    sub->add_option("--config", opts.config_path, "key = value config file");
    sub->add_option("--set", opts.settings, "override one config key (key=value), repeatable");
    sub->add_option("--output", opts.output_dir, "output directory for CSV files");
}

// Command defaults first, then the file, then --set, then --output.
RunConfig build_config(const CommonOptions& opts, SystemKind system) {
    RunConfig c;
    c.system = system;
    if (!opts.config_path.empty()) c = load_config_file(opts.config_path, c);
    for (const auto& s : opts.settings) {
        const auto [key, value] = split_assignment(s);
        apply_setting(c, key, value);
    }
    if (!opts.output_dir.empty()) apply_setting(c, "output_dir", opts.output_dir);
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-dependent logarithmic perturbation theory: oscillator and hydrogen runs"};
    app.require_subcommand(1);
    CommonOptions opts;

    auto* ho_verify_cmd = app.add_subcommand("ho-verify", "driven oscillator exactness and truncation checks");
    add_common(ho_verify_cmd, opts);

    double omega = 0.0;
    auto* ho_shift_cmd = app.add_subcommand("ho-shift", "oscillator AC shift against the closed form");
    add_common(ho_shift_cmd, opts);
    ho_shift_cmd->add_option("--omega", omega, "driving frequency")->required();

    auto* first_cmd = app.add_subcommand("hydrogen-first-order", "first-order hydrogen run for one N");
    add_common(first_cmd, opts);

    std::string cycles;
    auto* table_cmd = app.add_subcommand("table1", "dynamic shift and polarizability sweep over N");
    add_common(table_cmd, opts);
    table_cmd->add_option("--cycles", cycles, "comma-separated N list");

    std::string which;
    auto* fig_cmd = app.add_subcommand("figure-data", "data files for the shift and dipole figures");
    add_common(fig_cmd, opts);
    fig_cmd->add_option("--which", which, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
    fig_cmd->add_option("--cycles", cycles, "comma-separated N list (fig1)");

    auto* oracle_cmd = app.add_subcommand("oracle-dipole", "TDLPT dipole against the partial-wave TDSE");
    add_common(oracle_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    auto with_cycles = [&](RunConfig c) {
        if (!cycles.empty()) apply_setting(c, "cycles", cycles);
        return c;
    };

    return run_guarded(
        [&]() -> CommandResult {
            if (*ho_verify_cmd) return cmd_ho_verify(build_config(opts, SystemKind::Harmonic));
            if (*ho_shift_cmd) return cmd_ho_shift(build_config(opts, SystemKind::Harmonic), omega);
            if (*first_cmd) return cmd_hydrogen_first_order(build_config(opts, SystemKind::Hydrogen));
            if (*table_cmd) return cmd_table1(with_cycles(build_config(opts, SystemKind::Hydrogen)));
            if (*fig_cmd) return cmd_figure_data(with_cycles(build_config(opts, SystemKind::Hydrogen)), which);
            return cmd_oracle_dipole(build_config(opts, SystemKind::Hydrogen));
        },
        std::cout, std::cerr);
}
