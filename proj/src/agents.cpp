#include "perpsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace perpsim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void AgentParams::validate() const {
    require(sigma_f >= 0.0, "sigma_f must be >= 0");
    require(sigma_c >= 0.0, "sigma_c must be >= 0");
    require(sigma_n >= 0.0, "sigma_n must be >= 0");
    require(sigma_c > 0.0 || sigma_n > 0.0, "sigma_c or sigma_n must be > 0");
    require(k_max > 0.0 && k_max < 1.0, "k_max must lie in (0, 1)");
    require(l_min >= 1, "l_min must be >= 1");
    require(l_max >= l_min, "l_max must be >= l_min");
    require(sigma_eps >= 0.0, "sigma_eps must be >= 0");
}

TraderAgent create_agent(const AgentParams& params, Rng& rng) {
    TraderAgent agent;
    agent.w_f = params.sigma_f * rng.uniform();
    agent.w_c = params.sigma_c * rng.uniform();
    agent.w_n = params.sigma_n * rng.uniform();
    agent.stored_horizon = static_cast<int>(rng.uniform_int(params.l_min, params.l_max));
    agent.spread_cap = params.k_max * rng.uniform();
    agent.side = MarketSide::Neutral;
    return agent;
}

double fundamental_forecast_return(std::span<const double> prices, std::size_t t) {
    require(t < prices.size(), "fundamental forecast: t out of range");
    const auto history = prices.first(t + 1);
    const double mean =
        std::accumulate(history.begin(), history.end(), 0.0) / static_cast<double>(history.size());
    return std::log(mean / prices[t]);
}

double chartist_forecast_return(std::span<const double> prices, std::size_t t, int horizon) {
    require(horizon >= 1, "chartist forecast: horizon must be >= 1");
    require(t <= prices.size(), "chartist forecast: t out of range");
    require(t >= static_cast<std::size_t>(horizon) + 1, "chartist forecast: insufficient history");
    double sum = 0.0;
    for (int j = 1; j <= horizon; ++j) {
        const double prev = prices[t - j - 1];
        sum += (prices[t - j] - prev) / prev;
    }
    return sum / horizon;
}

double noise_forecast_return(double sigma_eps, Rng& rng) { return sigma_eps * rng.uniform(); }

double combine_returns(const TraderAgent& agent, double fundamental, double chartist,
                       double noise) {
    const double total = agent.w_f + agent.w_c + agent.w_n;
    require(total > 0.0, "agent has zero total strategy weight");
    return (agent.w_f * fundamental + agent.w_c * chartist + agent.w_n * noise) / total;
}

ForecastComponents composite_forecast(const TraderAgent& agent, std::span<const double> prices,
                                      std::size_t t, const AgentParams& params, Rng& rng) {
    ForecastComponents out;
    out.horizon = static_cast<int>(rng.uniform_int(params.l_min, params.l_max));
    out.fundamental = fundamental_forecast_return(prices, t);
    out.chartist = chartist_forecast_return(prices, t, out.horizon);
    out.noise = noise_forecast_return(params.sigma_eps, rng);
    out.composite = combine_returns(agent, out.fundamental, out.chartist, out.noise);
    out.price_forecast = prices[t] * std::exp(out.composite);
    return out;
}

std::vector<double> adjust_premia(std::span<const double> premia, std::size_t t) {
    require(t < premia.size(), "adjust_premia: t out of range");
    const double low = *std::min_element(premia.begin(), premia.begin() + t + 1);
    const double shift = std::abs(low) + 1.0;
    std::vector<double> out(premia.begin(), premia.end());
    for (double& p : out) p += shift;
    return out;
}

double positional_order(double price_forecast, double current_price, MarketSide side, double k) {
    const bool long_buys = price_forecast > current_price && side == MarketSide::Long;
    const bool short_buys = price_forecast < current_price && side == MarketSide::Short;
    if (long_buys || short_buys) return price_forecast * (1.0 - k);
    return -price_forecast * (1.0 + k);
}

double funding_order(double premium_forecast, double price_forecast,
                     double current_adjusted_premium, MarketSide side, double k) {
    const bool long_buys = premium_forecast < current_adjusted_premium && side == MarketSide::Long;
    const bool short_buys = premium_forecast > current_adjusted_premium && side == MarketSide::Short;
    if (long_buys || short_buys) return std::abs(price_forecast) * (1.0 - k);
    return -std::abs(price_forecast) * (1.0 + k);
}

OrderIntent decide_order(TraderAgent& agent, std::span<const double> spot,
                         std::span<const double> premia, std::size_t t, const MarketRules& rules,
                         const AgentParams& params, Rng& rng) {
    OrderIntent intent;
    if (rng.bernoulli(rules.exit_probability)) {
        agent.side = MarketSide::Neutral;
        intent.style = TradeStyle::Exit;
        return intent;
    }

    if (agent.side == MarketSide::Neutral)
        agent.side = rng.bernoulli(0.5) ? MarketSide::Long : MarketSide::Short;

    intent.k_used = rng.uniform(0.0, agent.spread_cap);

    // Longs trade positionally with probability 1 - bias, shorts with
    // probability bias.
    const bool below_bias = rng.bernoulli(rules.bias);
    const bool positional = agent.side == MarketSide::Long ? !below_bias : below_bias;

    const auto price = composite_forecast(agent, spot, t, params, rng);
    if (positional) {
        intent.style = TradeStyle::Positional;
        intent.horizon_used = price.horizon;
        intent.signed_price = positional_order(price.price_forecast, spot[t], agent.side,
                                               intent.k_used);
    } else {
        const auto adjusted = adjust_premia(premia.first(t + 1), t);
        const auto premium = composite_forecast(agent, adjusted, t, params, rng);
        intent.style = TradeStyle::Basis;
        intent.horizon_used = premium.horizon;
        intent.signed_price = funding_order(premium.price_forecast, price.price_forecast,
                                            adjusted[t], agent.side, intent.k_used);
    }

    if (intent.signed_price == 0.0 || !std::isfinite(intent.signed_price)) {
        intent.style = TradeStyle::None;
        intent.signed_price = 0.0;
    }
    return intent;
}

}  // namespace perpsim
