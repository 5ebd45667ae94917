#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace perpsim {

// Individuals-chart (Shewhart) statistics. Sigma is estimated from the
// average moving range of consecutive points divided by d2 for n = 2.
inline constexpr double kMovingRangeD2 = 1.128;

struct ShewhartSummary {
    double center = 0.0;
    double stddev = 0.0;
    double lcl = 0.0;
    double ucl = 0.0;
    int violations = 0;  // points strictly outside [lcl, ucl]
    int runs = 0;        // points in same-side runs of >= run_length points
};

/// Throws std::invalid_argument for series shorter than 2 points.
ShewhartSummary shewhart(std::span<const double> series, double sigma_mult = 3.0,
                         int run_length = 7);

struct LagCorrelation {
    int lag = 0;
    std::optional<double> correlation;  // absent when a segment has zero variance
};

/// Pearson correlation between a[i + lag] and b[i] over the overlapping
/// indices, for lag in [-max_lag, max_lag]. A positive peak lag means `a`
/// trails `b`.
std::vector<LagCorrelation> cross_correlation(std::span<const double> a,
                                              std::span<const double> b, int max_lag);

/// Classical sample cross-correlation function: full-series means and a 1/n
/// normalisation at every lag, same lag convention as cross_correlation.
/// Shrinks toward zero as |lag| grows, unlike the per-segment Pearson form.
std::vector<LagCorrelation> sample_cross_correlation(std::span<const double> a,
                                                     std::span<const double> b, int max_lag);

/// Highest defined correlation; the smallest |lag| wins ties.
std::optional<LagCorrelation> peak_correlation(std::span<const LagCorrelation> ccf);

struct MeanSummary {
    double center = 0.0;
    double stddev = 0.0;
    double lcl = 0.0;
    double ucl = 0.0;
    double violations = 0.0;
    double runs = 0.0;
};

/// Arithmetic mean of each statistic. Throws on an empty list.
MeanSummary aggregate(std::span<const ShewhartSummary> summaries);

struct SweepRow {
    double param_value = 0.0;
    MeanSummary stats;
};

struct SweepReport {
    std::string param_name;
    std::vector<SweepRow> rows;
};

}  // namespace perpsim
