#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "perpsim/rng.hpp"

namespace perpsim {

/// Population-level scales from which individual traders are drawn.
struct AgentParams {
    double sigma_f = 0.0;     // fundamentalist weight scale
    double sigma_c = 10.0;    // chartist weight scale
    double sigma_n = 10.0;    // noise weight scale
    double k_max = 0.5;       // spread-cap scale, in (0, 1)
    int l_min = 1;            // chartist horizon bounds
    int l_max = 5;
    double sigma_eps = 0.05;  // noise return scale

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class MarketSide { Neutral, Long, Short };

struct TraderAgent {
    double w_f = 0.0;
    double w_c = 0.0;
    double w_n = 0.0;
    double spread_cap = 0.0;  // per-order k is drawn from U(0, spread_cap)
    int stored_horizon = 1;   // drawn at creation, not used when forecasting
    MarketSide side = MarketSide::Neutral;
};

struct ForecastComponents {
    double fundamental = 0.0;
    double chartist = 0.0;
    double noise = 0.0;
    double composite = 0.0;       // weighted mean return
    double price_forecast = 0.0;  // prices[t] * exp(composite)
    int horizon = 1;              // chartist horizon drawn for this forecast
};

enum class TradeStyle { Positional, Basis, Exit, None };

struct OrderIntent {
    TradeStyle style = TradeStyle::None;
    int horizon_used = 0;
    double k_used = 0.0;
    double signed_price = 0.0;  // > 0 buy, < 0 sell, 0 no order
    int size = 1;
};

TraderAgent create_agent(const AgentParams& params, Rng& rng);

// Forecast returns. Series are indexed from 0 and t is the index of the
// current observation; only prices[0..t] are read.

/// log(mean(prices[0..t]) / prices[t])
double fundamental_forecast_return(std::span<const double> prices, std::size_t t);

/// Mean of the `horizon` simple returns ending at prices[t-1]. Requires
/// t >= horizon + 1; prices[t] itself is not read.
double chartist_forecast_return(std::span<const double> prices, std::size_t t, int horizon);

/// sigma_eps * U(0,1)
double noise_forecast_return(double sigma_eps, Rng& rng);

/// Weighted mean of the three component returns. Throws when all weights are 0.
double combine_returns(const TraderAgent& agent, double fundamental, double chartist,
                       double noise);

/// Draws a horizon from [l_min, l_max] and a noise return, then combines the
/// three strategies into a one-step-ahead price forecast.
ForecastComponents composite_forecast(const TraderAgent& agent, std::span<const double> prices,
                                      std::size_t t, const AgentParams& params, Rng& rng);

/// premia + |min(premia[0..t])| + 1, applied to the whole series.
std::vector<double> adjust_premia(std::span<const double> premia, std::size_t t);

/// Buys at forecast*(1-k) when a long expects a rise or a short expects a
/// fall; otherwise sells at forecast*(1+k). Sells are returned negative.
double positional_order(double price_forecast, double current_price, MarketSide side, double k);

/// Direction from the premium forecast, level from the price forecast: longs
/// buy when the premium is expected to fall, shorts when it is expected to rise.
double funding_order(double premium_forecast, double price_forecast,
                     double current_adjusted_premium, MarketSide side, double k);

struct MarketRules {
    double bias = 0.5;
    double exit_probability = 0.05;
};

/// One assay for a cohort member. May exit the agent (side reset to Neutral),
/// assigns a side to neutral agents, then picks positional or basis trading
/// by bias and prices the order. `agent.side` is updated in place.
OrderIntent decide_order(TraderAgent& agent, std::span<const double> spot,
                         std::span<const double> premia, std::size_t t, const MarketRules& rules,
                         const AgentParams& params, Rng& rng);

}  // namespace perpsim
