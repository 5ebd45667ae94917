#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "perpsim/session.hpp"

using namespace perpsim;
using doctest::Approx;

namespace {

SimulationConfig small_config() {
    SimulationConfig c;
    c.n_agents = 50;
    c.warmup_steps = 60;
    c.total_steps = 200;
    c.seed = 7;
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    SimulationConfig c;
    CHECK_NOTHROW(c.validate());

    auto bad = c;
    bad.cohort_size = 0;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("cohort_size"), std::invalid_argument);
    bad = c;
    bad.cohort_size = 201;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.bias = 1.5;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("bias"), std::invalid_argument);
    bad = c;
    bad.warmup_steps = 2 * c.tau + c.agents.l_max + 1;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("warmup_steps"), std::invalid_argument);
    bad.warmup_steps += 1;
    CHECK_NOTHROW(bad.validate());
    bad = c;
    bad.total_steps = bad.warmup_steps;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("set_param and get_param") {
    SimulationConfig c;
    set_param(c, "tau", 12);
    set_param(c, "k_max", 0.3);
    set_param(c, "mu", 0.25);
    CHECK(c.tau == 12);
    CHECK(c.agents.k_max == 0.3);
    CHECK(c.spot.mu == 0.25);
    CHECK(get_param(c, "tau") == 12.0);
    CHECK(get_param(c, "bias") == 0.5);
    CHECK_THROWS_WITH_AS(set_param(c, "tau", 2.5), doctest::Contains("integer"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(set_param(c, "gamma", 1.0), doctest::Contains("gamma"),
                         std::invalid_argument);
}

TEST_CASE("warm_up") {
    const auto config = small_config();
    SpotParams sp = config.spot;
    sp.n_steps = config.total_steps;
    Rng spot_rng(1);
    const auto spot = generate_spot_path(sp, spot_rng);

    Rng a(2);
    const auto w = warm_up(spot, config, a);
    for (int t = 0; t <= config.warmup_steps; ++t) {
        CHECK(w.premium[t] > -1.0);
        CHECK(w.premium[t] < 1.0);
        CHECK(w.premium[t] == w.perp[t] - spot[t]);
    }

    // 2*tau seeding steps alternate bid/ask by index parity.
    CHECK(w.book.bid_count() == static_cast<std::size_t>(config.tau));
    CHECK(w.book.ask_count() == static_cast<std::size_t>(config.tau));
    for (const auto& o : w.book.bids()) {
        CHECK(o.placed_at % 2 == 0);
        CHECK(o.placed_at >= config.warmup_steps - 2 * config.tau);
        const double offset = spot[static_cast<std::size_t>(o.placed_at)] - o.price;
        CHECK(offset == Approx(std::round(offset)));
        CHECK(offset >= 0.0);
        CHECK(offset <= 10.0);
    }
    for (const auto& o : w.book.asks()) CHECK(o.placed_at % 2 == 1);

    Rng b(2);
    const auto again = warm_up(spot, config, b);
    CHECK(again.perp == w.perp);
    CHECK(again.book.bids().size() == w.book.bids().size());
}

TEST_CASE("run_session produces consistent series") {
    const auto config = small_config();
    Rng rng(3);
    SessionTrace trace;
    SpotParams sp = config.spot;
    sp.n_steps = config.total_steps;
    Rng spot_rng(4);
    const auto spot = generate_spot_path(sp, spot_rng);
    const auto r = run_session(config, spot, rng, &trace);

    REQUIRE(r.spot.size() == 201);
    CHECK(r.perp.size() == 201);
    CHECK(r.premium.size() == 201);
    CHECK(r.spot == spot);
    for (std::size_t t = 0; t < r.spot.size(); ++t) CHECK(r.premium[t] == r.perp[t] - r.spot[t]);
    CHECK(r.analyzed_premium().size() == 141);

    REQUIRE(trace.steps.size() == static_cast<std::size_t>(config.total_steps - config.warmup_steps));
    int trades = 0;
    for (const auto& step : trace.steps) {
        CHECK(step.trades <= 1);
        CHECK(step.orders_submitted + step.exits <= config.cohort_size);
        if (step.book_size > 0)
            CHECK(step.oldest_order > static_cast<Timestep>(step.t) - config.tau);
        trades += step.trades;
    }
    CHECK(trades > 0);
    CHECK(trace.final_pool.size() == static_cast<std::size_t>(config.n_agents));
}

TEST_CASE("run_session is deterministic for a fixed seed") {
    const auto config = small_config();
    Rng a(10), b(10), c(11);
    const auto x = run_session(config, a);
    const auto y = run_session(config, b);
    const auto z = run_session(config, c);
    CHECK(x.spot == y.spot);
    CHECK(x.perp == y.perp);
    CHECK(x.premium == y.premium);
    CHECK(x.perp != z.perp);
}

TEST_CASE("with certain exit no orders are placed") {
    auto config = small_config();
    config.exit_probability = 1.0;
    Rng rng(12);
    SessionTrace trace;
    SpotParams sp = config.spot;
    sp.n_steps = config.total_steps;
    Rng spot_rng(13);
    const auto spot = generate_spot_path(sp, spot_rng);
    const auto r = run_session(config, spot, rng, &trace);
    for (const auto& step : trace.steps) {
        CHECK(step.orders_submitted == 0);
        CHECK(step.exits == config.cohort_size);
    }
    for (const auto& agent : trace.final_pool) CHECK(agent.side == MarketSide::Neutral);
    // Once the seeded book has expired the perp price is carried forward.
    const auto w = static_cast<std::size_t>(config.warmup_steps);
    const auto flat_from = w + static_cast<std::size_t>(config.tau) + 1;
    for (std::size_t t = flat_from + 1; t < r.perp.size(); ++t) CHECK(r.perp[t] == r.perp[flat_from]);
}

TEST_CASE("run_session rejects short or non-positive spot paths") {
    const auto config = small_config();
    Rng rng(1);
    std::vector<double> short_path(50, 100.0);
    CHECK_THROWS_AS(run_session(config, short_path, rng), std::invalid_argument);
    std::vector<double> bad(201, 100.0);
    bad[100] = 0.0;
    CHECK_THROWS_AS(run_session(config, bad, rng), std::invalid_argument);
}

TEST_CASE("run_batch") {
    const auto config = small_config();

    SUBCASE("one session equals run_session on stream 0") {
        const auto batch = run_batch(config, 1);
        REQUIRE(batch.size() == 1);
        auto rng = Rng::for_stream(config.seed, 0);
        const auto single = run_session(config, rng);
        CHECK(batch[0].perp == single.perp);
        CHECK(batch[0].spot == single.spot);
    }
    SUBCASE("results do not depend on the thread count") {
        const auto serial = run_batch(config, 12, 1);
        const auto parallel = run_batch(config, 12, 5);
        REQUIRE(serial.size() == parallel.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(serial[i].perp == parallel[i].perp);
            CHECK(serial[i].premium == parallel[i].premium);
        }
        // Sessions use distinct streams: fresh spot path per session.
        CHECK(serial[0].spot != serial[1].spot);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(run_batch(config, 0), std::invalid_argument);
        auto bad = config;
        bad.cohort_size = 0;
        CHECK_THROWS_AS(run_batch(bad, 2), std::invalid_argument);
    }
}

TEST_CASE("run_sweep") {
    const auto config = small_config();

    SUBCASE("a single value equals batch plus aggregate") {
        const std::vector<double> values{6};
        const auto report = run_sweep(config, "tau", values, 4, 2);
        REQUIRE(report.rows.size() == 1);
        CHECK(report.param_name == "tau");

        auto c = config;
        c.tau = 6;
        std::vector<ShewhartSummary> summaries;
        for (const auto& s : run_batch(c, 4, 1)) summaries.push_back(summarize(s));
        const auto expected = aggregate(summaries);
        CHECK(report.rows[0].param_value == 6);
        CHECK(report.rows[0].stats.center == expected.center);
        CHECK(report.rows[0].stats.ucl == expected.ucl);
        CHECK(report.rows[0].stats.runs == expected.runs);
    }
    SUBCASE("one row per value") {
        const std::vector<double> values{0.1, 0.3, 0.5};
        CHECK(run_sweep(config, "bias", values, 2).rows.size() == 3);
    }
    SUBCASE("invalid parameter or value") {
        const std::vector<double> values{1};
        CHECK_THROWS_AS(run_sweep(config, "nope", values, 2), std::invalid_argument);
        const std::vector<double> bad_bias{2.0};
        CHECK_THROWS_AS(run_sweep(config, "bias", bad_bias, 2), std::invalid_argument);
        CHECK_THROWS_AS(run_sweep(config, "bias", std::vector<double>{}, 2), std::invalid_argument);
    }
}
