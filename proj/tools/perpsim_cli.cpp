// perpsim: run single sessions, parameter sweeps, or re-analyze stored sessions.
//
//   perpsim run     [--config FILE] [--seed N] [--out DIR] [--svg] [--<key> VALUE]...
//   perpsim sweep   --param NAME --values v1,v2,... [--n-sims N] [...]
//   perpsim analyze [--in session.csv] [...]

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "perpsim/experiment.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out = "out";
    std::string input;
    std::string spot_csv;
    std::string param;
    std::string values;
    int n_sims = 100;
    int max_lag = 20;
    bool svg = false;
    std::map<std::string, std::string> settings;  // config key -> flag text
};

std::string dashed(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

void add_common(CLI::App& cmd, Options& opt) {
    cmd.add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd.add_option("--out", opt.out, "Output directory")->capture_default_str();
    cmd.add_option("--max-lag", opt.max_lag, "Cross-correlation lag range")->capture_default_str();
    cmd.add_flag("--svg", opt.svg, "Also write SVG charts");

    std::vector<std::string> keys = perpsim::numeric_param_names();
    keys.emplace_back("seed");
    keys.emplace_back("spot_mode");
    for (const auto& key : keys) {
        std::string names = "--" + key;
        if (dashed(key) != key) names += ",--" + dashed(key);
        cmd.add_option_function<std::string>(
            names, [&opt, key](const std::string& v) { opt.settings[key] = v; },
            "Override config key " + key);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based perpetual futures market simulator"};
    app.require_subcommand(1);

    Options opt;
    auto* run = app.add_subcommand("run", "Simulate one session");
    add_common(*run, opt);
    run->add_option("--spot-csv", opt.spot_csv, "Replay a spot path (one price per row)")
        ->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over a list of values");
    add_common(*sweep, opt);
    sweep->add_option("--param", opt.param, "Parameter to vary")->required();
    sweep->add_option("--values", opt.values, "Comma-separated values")->required();
    sweep->add_option("--n-sims", opt.n_sims, "Sessions per value")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "Recompute statistics from a session.csv");
    add_common(*analyze, opt);
    analyze->add_option("--in", opt.input, "session.csv to analyze (default OUT/session.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        perpsim::ExperimentSpec spec;
        perpsim::ConfigOverrides overrides(opt.settings.begin(), opt.settings.end());
        std::optional<std::filesystem::path> config_file;
        if (!opt.config_path.empty()) config_file = opt.config_path;
        spec.config = perpsim::load_config(config_file, overrides);
        spec.output_dir = opt.out;
        spec.emit_svg = opt.svg;
        spec.max_lag = opt.max_lag;

        if (run->parsed()) {
            spec.command = perpsim::Command::Run;
            if (!opt.spot_csv.empty()) spec.spot_csv = opt.spot_csv;
        } else if (sweep->parsed()) {
            spec.command = perpsim::Command::Sweep;
            spec.sweep = {opt.param, perpsim::parse_value_list(opt.values), opt.n_sims};
        } else {
            spec.command = perpsim::Command::Analyze;
            spec.input = opt.input.empty() ? spec.output_dir / "session.csv"
                                           : std::filesystem::path(opt.input);
        }

        for (const auto& path : perpsim::execute(spec)) std::cout << path.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "perpsim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
