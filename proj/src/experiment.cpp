#include "perpsim/experiment.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "perpsim/analytics.hpp"
#include "perpsim/csv_io.hpp"
#include "perpsim/svg_chart.hpp"

namespace perpsim {

namespace fs = std::filesystem;

namespace {

std::invalid_argument key_error(const std::string& key, const std::string& what) {
    return std::invalid_argument("config key '" + key + "': " + what);
}

bool is_numeric_key(const std::string& key) {
    for (const auto& name : numeric_param_names())
        if (name == key) return true;
    return false;
}

double parse_number(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw key_error(key, "expected a number, got '" + text + "'");
    return value;
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
    std::uint64_t value = 0;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw key_error(key, "expected a non-negative integer, got '" + text + "'");
    return value;
}

void set_numeric(SimulationConfig& config, const std::string& key, double value) {
    try {
        set_param(config, key, value);
    } catch (const std::invalid_argument& e) {
        throw key_error(key, e.what());
    }
}

void apply_json(SimulationConfig& config, const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "spot_mode") {
            if (!value.is_string()) throw key_error(key, "expected a string");
            config.spot.mode = parse_spot_mode(value.get<std::string>());
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw key_error(key, "expected a non-negative integer");
            config.seed = value.get<std::uint64_t>();
        } else if (is_numeric_key(key)) {
            if (!value.is_number()) throw key_error(key, "expected a number");
            set_numeric(config, key, value.get<double>());
        } else {
            throw key_error(key, "unknown key");
        }
    }
}

SimulationConfig finish(SimulationConfig config, const ConfigOverrides& overrides) {
    for (const auto& [key, value] : overrides) apply_setting(config, key, value);
    config.spot.n_steps = config.total_steps;
    config.validate();
    return config;
}

void write_text(const fs::path& path, const std::string& text, WrittenFiles& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
    written.push_back(path);
}

template <typename Writer>
void write_csv_file(const fs::path& path, WrittenFiles& written, Writer&& writer) {
    std::ostringstream text;
    writer(text);
    write_text(path, text.str(), written);
}

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory " + dir.string());
}

std::vector<double> index_axis(std::size_t first, std::size_t count) {
    std::vector<double> x(count);
    for (std::size_t i = 0; i < count; ++i) x[i] = static_cast<double>(first + i);
    return x;
}

WrittenFiles write_session_outputs(const SessionResult& result, const ExperimentSpec& spec,
                                   bool with_session_csv) {
    prepare_output_dir(spec.output_dir);
    WrittenFiles written;
    const auto window = static_cast<std::size_t>(result.warmup_steps);
    const auto premium = result.analyzed_premium();
    const auto summary = shewhart(premium);
    const auto perp = std::span<const double>(result.perp).subspan(window);
    const auto spot = std::span<const double>(result.spot).subspan(window);
    const auto ccf = cross_correlation(perp, spot, spec.max_lag);

    if (with_session_csv)
        write_csv_file(spec.output_dir / "session.csv", written,
                       [&](std::ostream& o) { write_session_csv(o, result); });
    write_csv_file(spec.output_dir / "summary.csv", written,
                   [&](std::ostream& o) { write_summary_csv(o, summary); });
    write_csv_file(spec.output_dir / "ccf.csv", written,
                   [&](std::ostream& o) { write_ccf_csv(o, ccf); });

    if (!spec.emit_svg) return written;

    const auto x = index_axis(window, premium.size());
    LineChart prices{"Spot vs Perp", "timestep", "price", {}, {}};
    prices.series.push_back({"spot", x, {spot.begin(), spot.end()}, "#d62728"});
    prices.series.push_back({"perp", x, {perp.begin(), perp.end()}, "#2ca02c"});
    write_text(spec.output_dir / "spot_perp.svg", prices.render(), written);

    LineChart chart{"Shewhart chart of premiums", "timestep", "premium", {}, {}};
    chart.series.push_back({"premium", x, {premium.begin(), premium.end()}, "#1f77b4"});
    const std::vector<double> ends{x.front(), x.back()};
    chart.series.push_back({"center", ends, {summary.center, summary.center}, "#444444"});
    chart.series.push_back({"UCL", ends, {summary.ucl, summary.ucl}, "#d62728", true});
    chart.series.push_back({"LCL", ends, {summary.lcl, summary.lcl}, "#d62728", true});
    for (std::size_t i = 0; i < premium.size(); ++i)
        if (premium[i] < summary.lcl || premium[i] > summary.ucl)
            chart.markers.push_back({x[i], premium[i]});
    write_text(spec.output_dir / "premium_chart.svg", chart.render(), written);

    LineChart corr{"Cross-correlation perp vs spot", "lag", "correlation", {}, {}};
    ChartSeries line{"correlation", {}, {}, "#9467bd"};
    for (const auto& c : ccf) {
        if (!c.correlation) continue;
        line.x.push_back(c.lag);
        line.y.push_back(*c.correlation);
    }
    corr.series.push_back(std::move(line));
    if (auto peak = peak_correlation(ccf)) corr.markers.push_back({double(peak->lag), *peak->correlation});
    write_text(spec.output_dir / "ccf.svg", corr.render(), written);
    return written;
}

}  // namespace

void apply_setting(SimulationConfig& config, const std::string& key, const std::string& value) {
    if (key == "spot_mode") {
        try {
            config.spot.mode = parse_spot_mode(value);
        } catch (const std::invalid_argument& e) {
            throw key_error(key, e.what());
        }
    } else if (key == "seed") {
        config.seed = parse_seed(key, value);
    } else if (is_numeric_key(key)) {
        set_numeric(config, key, parse_number(key, value));
    } else {
        throw key_error(key, "unknown key");
    }
}

SimulationConfig load_config_text(const std::string& json_text, const ConfigOverrides& overrides) {
    SimulationConfig config;
    bool blank = json_text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!blank) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
        }
        apply_json(config, doc);
    }
    try {
        return finish(config, overrides);
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        if (what.rfind("config key", 0) == 0) throw;
        throw std::invalid_argument("invalid config: " + what);
    }
}

SimulationConfig load_config(const std::optional<fs::path>& file, const ConfigOverrides& overrides) {
    if (!file) return load_config_text("", overrides);
    std::ifstream in(*file, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file " + file->string());
    std::ostringstream text;
    text << in.rdbuf();
    return load_config_text(text.str(), overrides);
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) throw std::invalid_argument("--values: empty item");
        values.push_back(parse_number("values", item.substr(b, e - b + 1)));
    }
    if (values.empty()) throw std::invalid_argument("--values: no values given");
    return values;
}

WrittenFiles cmd_run(const ExperimentSpec& spec) {
    auto rng = Rng::for_stream(spec.config.seed, 0);
    SessionResult result;
    if (spec.spot_csv) {
        std::ifstream in(*spec.spot_csv);
        if (!in) throw std::runtime_error("cannot read spot path " + spec.spot_csv->string());
        const auto spot = read_price_column(in);
        result = run_session(spec.config, spot, rng);
    } else {
        result = run_session(spec.config, rng);
    }
    return write_session_outputs(result, spec, true);
}

WrittenFiles cmd_sweep(const ExperimentSpec& spec) {
    if (spec.sweep.param.empty()) throw std::invalid_argument("sweep: --param is required");
    if (spec.sweep.values.empty()) throw std::invalid_argument("sweep: --values is required");
    // Validate every point before spending time on simulations.
    for (double v : spec.sweep.values) {
        SimulationConfig probe = spec.config;
        try {
            set_param(probe, spec.sweep.param, v);
            probe.validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("sweep " + spec.sweep.param + "=" + format_double(v) +
                                        ": " + e.what());
        }
    }
    prepare_output_dir(spec.output_dir);
    const auto report = run_sweep(spec.config, spec.sweep.param, spec.sweep.values,
                                  spec.sweep.n_sims, spec.threads);

    WrittenFiles written;
    write_csv_file(spec.output_dir / "sweep.csv", written,
                   [&](std::ostream& o) { write_sweep_csv(o, report); });
    if (!spec.emit_svg) return written;

    std::vector<double> x;
    ChartSeries center{"Center", {}, {}, "#1f77b4"};
    ChartSeries lcl{"LCL", {}, {}, "#d62728"};
    ChartSeries ucl{"UCL", {}, {}, "#d62728", true};
    ChartSeries violations{"Violations", {}, {}, "#1f77b4"};
    ChartSeries runs{"Runs", {}, {}, "#d62728"};
    for (const auto& row : report.rows) {
        for (auto* s : {&center, &lcl, &ucl, &violations, &runs}) s->x.push_back(row.param_value);
        center.y.push_back(row.stats.center);
        lcl.y.push_back(row.stats.lcl);
        ucl.y.push_back(row.stats.ucl);
        violations.y.push_back(row.stats.violations);
        runs.y.push_back(row.stats.runs);
    }
    LineChart limits{"Varying " + report.param_name + " - Center, LCL and UCL", report.param_name,
                     "value", {center, lcl, ucl}, {}};
    LineChart counts{"Varying " + report.param_name + " - Violations and Runs",
                     report.param_name, "count", {violations, runs}, {}};
    write_text(spec.output_dir / "sweep_limits.svg", limits.render(), written);
    write_text(spec.output_dir / "sweep_counts.svg", counts.render(), written);
    return written;
}

WrittenFiles cmd_analyze(const ExperimentSpec& spec) {
    std::ifstream in(spec.input);
    if (!in) throw std::runtime_error("cannot read " + spec.input.string());
    const auto result = read_session_csv(in, spec.config.warmup_steps);
    return write_session_outputs(result, spec, false);
}

WrittenFiles execute(const ExperimentSpec& spec) {
    switch (spec.command) {
        case Command::Run: return cmd_run(spec);
        case Command::Sweep: return cmd_sweep(spec);
        case Command::Analyze: return cmd_analyze(spec);
    }
    throw std::logic_error("unknown command");
}

}  // namespace perpsim
