#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perpsim/session.hpp"

namespace perpsim {

enum class Command { Run, Sweep, Analyze };

struct SweepSpec {
    std::string param;
    std::vector<double> values;
    int n_sims = 100;
};

struct ExperimentSpec {
    SimulationConfig config;
    Command command = Command::Run;
    SweepSpec sweep;
    std::filesystem::path output_dir = "out";
    bool emit_svg = false;
    std::filesystem::path input;                   // analyze: session.csv to read
    std::optional<std::filesystem::path> spot_csv;  // run: replay a stored spot path
    int max_lag = 20;
    int threads = 0;  // 0 = default_thread_count()
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Applies one textual `key = value` assignment. Keys are the numeric
/// parameter names plus `seed` and `spot_mode`. Errors name the key.
void apply_setting(SimulationConfig& config, const std::string& key, const std::string& value);

/// Defaults, then the JSON object in `file` (if any), then `overrides` in
/// order. The result is validated; any failure throws std::invalid_argument
/// with the offending key in the message.
SimulationConfig load_config(const std::optional<std::filesystem::path>& file,
                             const ConfigOverrides& overrides = {});

/// Same as load_config but reads the JSON from a string.
SimulationConfig load_config_text(const std::string& json_text,
                                  const ConfigOverrides& overrides = {});

/// "0.05,0.1,0.15" -> {0.05, 0.1, 0.15}. Throws on empty or non-numeric items.
std::vector<double> parse_value_list(const std::string& text);

/// Files written by a command, in creation order.
using WrittenFiles = std::vector<std::filesystem::path>;

/// session.csv, summary.csv, ccf.csv (+ spot_perp.svg, premium_chart.svg, ccf.svg)
WrittenFiles cmd_run(const ExperimentSpec& spec);

/// sweep.csv (+ sweep_limits.svg, sweep_counts.svg)
WrittenFiles cmd_sweep(const ExperimentSpec& spec);

/// Recomputes summary.csv and ccf.csv from spec.input using config.warmup_steps.
WrittenFiles cmd_analyze(const ExperimentSpec& spec);

WrittenFiles execute(const ExperimentSpec& spec);

}  // namespace perpsim
