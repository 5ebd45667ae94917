#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perpsim/agents.hpp"
#include "perpsim/analytics.hpp"
#include "perpsim/orderbook.hpp"
#include "perpsim/price_process.hpp"
#include "perpsim/rng.hpp"

namespace perpsim {

struct SimulationConfig {
    SpotParams spot;  // spot.n_steps follows total_steps
    AgentParams agents;
    int n_agents = 200;
    int cohort_size = 4;
    int tau = 8;
    double bias = 0.5;
    double exit_probability = 0.05;
    int warmup_steps = 250;
    int total_steps = 1000;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

/// Names accepted by set_param / run_sweep.
const std::vector<std::string>& numeric_param_names();

/// Assigns a numeric field by name. Integer fields reject non-integral
/// values; unknown names throw std::invalid_argument.
void set_param(SimulationConfig& config, std::string_view name, double value);
double get_param(const SimulationConfig& config, std::string_view name);

struct SessionResult {
    std::vector<double> spot;
    std::vector<double> perp;
    std::vector<double> premium;  // perp - spot
    int warmup_steps = 0;

    /// premium[warmup_steps..end], the span the control statistics use.
    std::span<const double> analyzed_premium() const {
        return std::span<const double>(premium).subspan(static_cast<std::size_t>(warmup_steps));
    }
};

struct WarmUp {
    std::vector<double> perp;     // full length, filled for t <= warmup_steps
    std::vector<double> premium;  // same shape
    OrderBook book;
};

/// Noisy perp prefix around spot and a seeded book of alternating bids and
/// asks over the 2*tau steps before warm-up ends.
WarmUp warm_up(std::span<const double> spot, const SimulationConfig& config, Rng& rng);

/// Per-step record of the main loop, for diagnostics and invariant checks.
struct StepRecord {
    std::size_t t = 0;
    int orders_submitted = 0;
    int trades = 0;
    int exits = 0;
    std::size_t book_size = 0;  // after expiry
    Timestep oldest_order = 0;  // after expiry; t + 1 when the book is empty
};

struct SessionTrace {
    std::vector<StepRecord> steps;
    std::vector<TraderAgent> final_pool;
};

/// One trading session on a freshly generated spot path and agent pool.
SessionResult run_session(const SimulationConfig& config, Rng& rng);

/// One trading session on a supplied spot path (at least total_steps + 1 points).
SessionResult run_session(const SimulationConfig& config, std::span<const double> spot, Rng& rng,
                          SessionTrace* trace = nullptr);

/// Worker count from PERP_ABM_THREADS, else hardware concurrency.
int default_thread_count();

/// n_sims sessions; session i draws from Rng::for_stream(config.seed, i), so
/// results do not depend on the thread count.
std::vector<SessionResult> run_batch(const SimulationConfig& config, int n_sims, int threads = 0);

ShewhartSummary summarize(const SessionResult& result);

/// For each value: set the parameter, run a batch, average the per-session
/// control statistics.
SweepReport run_sweep(const SimulationConfig& base, std::string_view param,
                      std::span<const double> values, int n_sims, int threads = 0);

}  // namespace perpsim
