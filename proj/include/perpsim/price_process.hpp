#pragma once

#include <string_view>
#include <vector>

#include "perpsim/rng.hpp"

namespace perpsim {

enum class SpotMode { Geometric, Additive };

SpotMode parse_spot_mode(std::string_view name);
std::string_view to_string(SpotMode mode);

struct SpotParams {
    double s0 = 100.0;
    double mu = 1.0;
    double sigma = 0.5;
    int n_steps = 1000;
    double t0 = 0.0;
    double t1 = 1.0;
    SpotMode mode = SpotMode::Geometric;

    double dt() const { return (t1 - t0) / n_steps; }
    void validate() const;
};

// Additive paths are clamped here so ratio-based forecasts stay defined.
inline constexpr double kAdditivePriceFloor = 1e-6;

/// Spot price path of n_steps + 1 points starting at s0.
///   geometric: S' = S * exp((mu - sigma^2/2) dt + sigma sqrt(dt) eps)
///   additive:  S' = max(S + mu dt + sigma sqrt(dt) eps, kAdditivePriceFloor)
std::vector<double> generate_spot_path(const SpotParams& params, Rng& rng);

}  // namespace perpsim
