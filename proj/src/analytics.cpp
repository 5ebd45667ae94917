#include "perpsim/analytics.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace perpsim {

namespace {

int side_of(double x, double center) {
    if (x > center) return 1;
    if (x < center) return -1;
    return 0;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

ShewhartSummary shewhart(std::span<const double> series, double sigma_mult, int run_length) {
    if (series.size() < 2) throw std::invalid_argument("shewhart: series needs at least 2 points");
    if (run_length < 1) throw std::invalid_argument("shewhart: run_length must be >= 1");

    ShewhartSummary s;
    const auto n = static_cast<double>(series.size());
    s.center = std::accumulate(series.begin(), series.end(), 0.0) / n;

    double moving_range = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i)
        moving_range += std::abs(series[i] - series[i - 1]);
    s.stddev = moving_range / (n - 1.0) / kMovingRangeD2;
    s.lcl = s.center - sigma_mult * s.stddev;
    s.ucl = s.center + sigma_mult * s.stddev;

    for (double x : series)
        if (x < s.lcl || x > s.ucl) ++s.violations;

    // Maximal runs of points strictly on one side of the center line.
    std::size_t i = 0;
    while (i < series.size()) {
        const int side = side_of(series[i], s.center);
        std::size_t j = i + 1;
        while (j < series.size() && side_of(series[j], s.center) == side) ++j;
        const auto length = static_cast<int>(j - i);
        if (side != 0 && length >= run_length) s.runs += length;
        i = j;
    }
    return s;
}

std::vector<LagCorrelation> cross_correlation(std::span<const double> a,
                                              std::span<const double> b, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("cross_correlation: max_lag must be >= 0");
    if (a.size() != b.size())
        throw std::invalid_argument("cross_correlation: series must have equal length");
    if (a.size() <= static_cast<std::size_t>(max_lag) + 2)
        throw std::invalid_argument("cross_correlation: series too short for max_lag");

    std::vector<LagCorrelation> out;
    out.reserve(2 * static_cast<std::size_t>(max_lag) + 1);
    const std::size_t n = a.size();
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        const auto shift = static_cast<std::size_t>(std::abs(lag));
        const std::size_t overlap = n - shift;
        // lag >= 0 pairs a[i + lag] with b[i]; lag < 0 pairs a[i] with b[i - lag].
        auto xa = lag >= 0 ? a.subspan(shift, overlap) : a.first(overlap);
        auto xb = lag >= 0 ? b.first(overlap) : b.subspan(shift, overlap);
        out.push_back({lag, pearson(xa, xb)});
    }
    return out;
}

std::vector<LagCorrelation> sample_cross_correlation(std::span<const double> a,
                                                     std::span<const double> b, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("sample_cross_correlation: max_lag must be >= 0");
    if (a.size() != b.size() || a.size() <= static_cast<std::size_t>(max_lag) + 2)
        throw std::invalid_argument("sample_cross_correlation: bad series lengths");

    const auto n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }

    std::vector<LagCorrelation> out;
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        if (saa <= 0.0 || sbb <= 0.0) {
            out.push_back({lag, std::nullopt});
            continue;
        }
        double sab = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto j = static_cast<std::ptrdiff_t>(i) + lag;
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(a.size())) continue;
            sab += (a[static_cast<std::size_t>(j)] - ma) * (b[i] - mb);
        }
        out.push_back({lag, sab / std::sqrt(saa * sbb)});
    }
    return out;
}

std::optional<LagCorrelation> peak_correlation(std::span<const LagCorrelation> ccf) {
    std::optional<LagCorrelation> best;
    for (const auto& c : ccf) {
        if (!c.correlation) continue;
        if (!best || *c.correlation > *best->correlation ||
            (*c.correlation == *best->correlation && std::abs(c.lag) < std::abs(best->lag)))
            best = c;
    }
    return best;
}

MeanSummary aggregate(std::span<const ShewhartSummary> summaries) {
    if (summaries.empty()) throw std::invalid_argument("aggregate: no summaries");
    MeanSummary m;
    for (const auto& s : summaries) {
        m.center += s.center;
        m.stddev += s.stddev;
        m.lcl += s.lcl;
        m.ucl += s.ucl;
        m.violations += s.violations;
        m.runs += s.runs;
    }
    const auto n = static_cast<double>(summaries.size());
    m.center /= n;
    m.stddev /= n;
    m.lcl /= n;
    m.ucl /= n;
    m.violations /= n;
    m.runs /= n;
    return m;
}

}  // namespace perpsim
