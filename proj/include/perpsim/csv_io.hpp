#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "perpsim/analytics.hpp"
#include "perpsim/session.hpp"

namespace perpsim {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by header name; throws std::runtime_error if missing.
    std::size_t column(const std::string& name) const;
};

/// Plain comma-separated text without quoting. Throws std::runtime_error on
/// ragged rows.
CsvTable read_csv(std::istream& in);

// Output schemas:
//   session.csv  t,spot,perp,premium
//   summary.csv  center,stddev,lcl,ucl,violations,runs
//   ccf.csv      lag,correlation (empty correlation when undefined)
//   sweep.csv    param_value,center,stddev,lcl,ucl,violations,runs
void write_session_csv(std::ostream& out, const SessionResult& result);
void write_summary_csv(std::ostream& out, const ShewhartSummary& summary);
void write_ccf_csv(std::ostream& out, std::span<const LagCorrelation> ccf);
void write_sweep_csv(std::ostream& out, const SweepReport& report);

/// Parses a session.csv back into series; warmup_steps is taken from the caller.
SessionResult read_session_csv(std::istream& in, int warmup_steps);

/// One price per row, first column; a non-numeric first row is treated as a header.
std::vector<double> read_price_column(std::istream& in);

}  // namespace perpsim
