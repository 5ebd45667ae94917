#include "perpsim/csv_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace perpsim {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& text, double& value) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

double to_double(const std::string& text) {
    double value = 0.0;
    if (!parse_double(text, value))
        throw std::runtime_error("csv: not a number: '" + text + "'");
    return value;
}

std::string strip(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    return line;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf.data(), ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("csv: missing column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty()) continue;
        auto fields = split(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
            continue;
        }
        if (fields.size() != table.header.size())
            throw std::runtime_error("csv: row has " + std::to_string(fields.size()) +
                                     " fields, header has " +
                                     std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

void write_session_csv(std::ostream& out, const SessionResult& result) {
    out << "t,spot,perp,premium\n";
    for (std::size_t t = 0; t < result.spot.size(); ++t)
        out << t << ',' << format_double(result.spot[t]) << ',' << format_double(result.perp[t])
            << ',' << format_double(result.premium[t]) << '\n';
}

void write_summary_csv(std::ostream& out, const ShewhartSummary& s) {
    out << "center,stddev,lcl,ucl,violations,runs\n";
    out << format_double(s.center) << ',' << format_double(s.stddev) << ','
        << format_double(s.lcl) << ',' << format_double(s.ucl) << ',' << s.violations << ','
        << s.runs << '\n';
}

void write_ccf_csv(std::ostream& out, std::span<const LagCorrelation> ccf) {
    out << "lag,correlation\n";
    for (const auto& c : ccf) {
        out << c.lag << ',';
        if (c.correlation) out << format_double(*c.correlation);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "param_value,center,stddev,lcl,ucl,violations,runs\n";
    for (const auto& row : report.rows) {
        const auto& m = row.stats;
        out << format_double(row.param_value) << ',' << format_double(m.center) << ','
            << format_double(m.stddev) << ',' << format_double(m.lcl) << ','
            << format_double(m.ucl) << ',' << format_double(m.violations) << ','
            << format_double(m.runs) << '\n';
    }
}

SessionResult read_session_csv(std::istream& in, int warmup_steps) {
    const auto table = read_csv(in);
    const auto spot = table.column("spot");
    const auto perp = table.column("perp");
    const auto premium = table.column("premium");

    SessionResult result;
    result.warmup_steps = warmup_steps;
    for (const auto& row : table.rows) {
        result.spot.push_back(to_double(row[spot]));
        result.perp.push_back(to_double(row[perp]));
        result.premium.push_back(to_double(row[premium]));
    }
    if (result.premium.size() < static_cast<std::size_t>(warmup_steps) + 2)
        throw std::runtime_error("session.csv: fewer rows than warmup_steps + 2");
    return result;
}

std::vector<double> read_price_column(std::istream& in) {
    std::vector<double> prices;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty()) continue;
        const auto cell = split(line).front();
        double value = 0.0;
        if (!parse_double(cell, value)) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("price column: not a number: '" + cell + "'");
        }
        first = false;
        prices.push_back(value);
    }
    return prices;
}

}  // namespace perpsim
