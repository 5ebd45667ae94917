#include "perpsim/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace perpsim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

enum class Kind { Real, Integer };

struct ParamSlot {
    const char* name;
    Kind kind;
    double* (*real)(SimulationConfig&);
    int* (*integer)(SimulationConfig&);
};

#define PERPSIM_REAL(field_name, expr) \
    ParamSlot{field_name, Kind::Real, [](SimulationConfig& c) -> double* { return &(expr); }, nullptr}
#define PERPSIM_INT(field_name, expr) \
    ParamSlot{field_name, Kind::Integer, nullptr, [](SimulationConfig& c) -> int* { return &(expr); }}

const std::vector<ParamSlot>& param_slots() {
    static const std::vector<ParamSlot> slots = {
        PERPSIM_REAL("s0", c.spot.s0),
        PERPSIM_REAL("mu", c.spot.mu),
        PERPSIM_REAL("sigma", c.spot.sigma),
        PERPSIM_REAL("t0", c.spot.t0),
        PERPSIM_REAL("t1", c.spot.t1),
        PERPSIM_REAL("sigma_f", c.agents.sigma_f),
        PERPSIM_REAL("sigma_c", c.agents.sigma_c),
        PERPSIM_REAL("sigma_n", c.agents.sigma_n),
        PERPSIM_REAL("sigma_eps", c.agents.sigma_eps),
        PERPSIM_REAL("k_max", c.agents.k_max),
        PERPSIM_INT("l_min", c.agents.l_min),
        PERPSIM_INT("l_max", c.agents.l_max),
        PERPSIM_INT("n_agents", c.n_agents),
        PERPSIM_INT("cohort_size", c.cohort_size),
        PERPSIM_INT("tau", c.tau),
        PERPSIM_REAL("bias", c.bias),
        PERPSIM_REAL("exit_probability", c.exit_probability),
        PERPSIM_INT("warmup_steps", c.warmup_steps),
        PERPSIM_INT("total_steps", c.total_steps),
    };
    return slots;
}

#undef PERPSIM_REAL
#undef PERPSIM_INT

const ParamSlot& find_slot(std::string_view name) {
    for (const auto& slot : param_slots())
        if (name == slot.name) return slot;
    throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
}

}  // namespace

void SimulationConfig::validate() const {
    SpotParams path = spot;
    path.n_steps = total_steps;
    path.validate();
    agents.validate();
    require(n_agents >= 1, "n_agents must be >= 1");
    require(cohort_size >= 1, "cohort_size must be >= 1");
    require(cohort_size <= n_agents, "cohort_size must be <= n_agents");
    require(tau >= 1, "tau must be >= 1");
    require(is_probability(bias), "bias must lie in [0, 1]");
    require(is_probability(exit_probability), "exit_probability must lie in [0, 1]");
    require(warmup_steps >= 2 * tau + agents.l_max + 2,
            "warmup_steps must be >= 2*tau + l_max + 2");
    require(total_steps > warmup_steps, "total_steps must be > warmup_steps");
}

const std::vector<std::string>& numeric_param_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& slot : param_slots()) out.emplace_back(slot.name);
        return out;
    }();
    return names;
}

void set_param(SimulationConfig& config, std::string_view name, double value) {
    const auto& slot = find_slot(name);
    require(std::isfinite(value), "parameter '" + std::string(name) + "' must be finite");
    if (slot.kind == Kind::Real) {
        *slot.real(config) = value;
        return;
    }
    require(value == std::round(value) && std::abs(value) < 1e9,
            "parameter '" + std::string(name) + "' must be an integer");
    *slot.integer(config) = static_cast<int>(value);
}

double get_param(const SimulationConfig& config, std::string_view name) {
    const auto& slot = find_slot(name);
    SimulationConfig copy = config;
    if (slot.kind == Kind::Real) return *slot.real(copy);
    return *slot.integer(copy);
}

WarmUp warm_up(std::span<const double> spot, const SimulationConfig& config, Rng& rng) {
    const auto warmup = static_cast<std::size_t>(config.warmup_steps);
    require(spot.size() > warmup, "warm_up: spot path shorter than warm-up");

    WarmUp w;
    w.perp.assign(spot.size(), 0.0);
    w.premium.assign(spot.size(), 0.0);
    for (std::size_t t = 0; t <= warmup; ++t) {
        w.perp[t] = spot[t] + rng.uniform(-1.0, 1.0);
        w.premium[t] = w.perp[t] - spot[t];
    }

    const std::size_t window = 2 * static_cast<std::size_t>(config.tau);
    for (std::size_t i = warmup - window; i < warmup; ++i) {
        const auto offset = static_cast<double>(rng.uniform_int(0, 10));
        const bool bid = i % 2 == 0;
        const double price = bid ? spot[i] - offset : spot[i] + offset;
        // Only reachable on very low-priced paths.
        if (price <= 0.0) continue;
        w.book.rest(bid ? Side::Bid : Side::Ask, price, static_cast<Timestep>(i));
    }
    return w;
}

SessionResult run_session(const SimulationConfig& config, Rng& rng) {
    config.validate();
    SpotParams params = config.spot;
    params.n_steps = config.total_steps;
    const auto spot = generate_spot_path(params, rng);
    return run_session(config, spot, rng);
}

SessionResult run_session(const SimulationConfig& config, std::span<const double> spot,
                          Rng& rng, SessionTrace* trace) {
    config.validate();
    const auto length = static_cast<std::size_t>(config.total_steps) + 1;
    require(spot.size() >= length, "run_session: spot path shorter than total_steps + 1");
    spot = spot.first(length);
    require(std::all_of(spot.begin(), spot.end(), [](double p) { return p > 0.0; }),
            "run_session: spot prices must be positive");

    std::vector<TraderAgent> pool;
    pool.reserve(static_cast<std::size_t>(config.n_agents));
    for (int i = 0; i < config.n_agents; ++i) pool.push_back(create_agent(config.agents, rng));

    auto [perp, premium, book] = warm_up(spot, config, rng);

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto cohort = static_cast<std::size_t>(config.cohort_size);
    const MarketRules rules{config.bias, config.exit_probability};

    for (auto t = static_cast<std::size_t>(config.warmup_steps);
         t < static_cast<std::size_t>(config.total_steps); ++t) {
        // Partial Fisher-Yates: order[0..cohort) is a uniform sample without
        // replacement, in random order.
        for (std::size_t i = 0; i < cohort; ++i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size()) - 1));
            std::swap(order[i], order[j]);
        }

        StepRecord record;
        record.t = t;
        std::optional<double> trade;
        for (std::size_t i = 0; i < cohort && !trade; ++i) {
            auto& agent = pool[order[i]];
            const auto intent = decide_order(agent, spot, premium, t, rules, config.agents, rng);
            if (intent.style == TradeStyle::Exit) ++record.exits;
            if (intent.signed_price == 0.0) continue;
            ++record.orders_submitted;
            trade = book.submit(intent.signed_price, intent.size, static_cast<Timestep>(t));
            if (trade) ++record.trades;
        }

        double next = perp[t];
        if (trade)
            next = *trade;
        else if (auto mid = book.mid_point())
            next = *mid;

        perp[t + 1] = next;
        premium[t + 1] = perp[t + 1] - spot[t + 1];
        book.expire_orders(config.tau, static_cast<Timestep>(t));

        if (trace) {
            record.book_size = book.size();
            record.oldest_order = static_cast<Timestep>(t) + 1;
            for (const auto& side : {book.bids(), book.asks()})
                for (const auto& o : side) record.oldest_order = std::min(record.oldest_order, o.placed_at);
            trace->steps.push_back(record);
        }
    }
    if (trace) trace->final_pool = pool;

    SessionResult result;
    result.spot.assign(spot.begin(), spot.end());
    result.perp = std::move(perp);
    result.premium = std::move(premium);
    result.warmup_steps = config.warmup_steps;
    return result;
}

int default_thread_count() {
    if (const char* env = std::getenv("PERP_ABM_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<SessionResult> run_batch(const SimulationConfig& config, int n_sims, int threads) {
    require(n_sims >= 1, "n_sims must be >= 1");
    config.validate();
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, n_sims);

    std::vector<SessionResult> results(static_cast<std::size_t>(n_sims));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (int i = next++; i < n_sims; i = next++) {
            if (failed) return;
            try {
                auto rng = Rng::for_stream(config.seed, static_cast<std::uint64_t>(i));
                results[static_cast<std::size_t>(i)] = run_session(config, rng);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

ShewhartSummary summarize(const SessionResult& result) {
    return shewhart(result.analyzed_premium());
}

SweepReport run_sweep(const SimulationConfig& base, std::string_view param,
                      std::span<const double> values, int n_sims, int threads) {
    find_slot(param);
    require(!values.empty(), "sweep needs at least one value");

    SweepReport report;
    report.param_name = std::string(param);
    for (double value : values) {
        SimulationConfig config = base;
        set_param(config, param, value);
        const auto sessions = run_batch(config, n_sims, threads);
        std::vector<ShewhartSummary> summaries;
        summaries.reserve(sessions.size());
        for (const auto& s : sessions) summaries.push_back(summarize(s));
        report.rows.push_back({value, aggregate(summaries)});
    }
    return report;
}

}  // namespace perpsim
