#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "perpsim/orderbook.hpp"

using namespace perpsim;

namespace {

// Linear-scan model of the same book, kept deliberately naive.
struct ReferenceBook {
    struct Entry {
        bool bid;
        double price;
        Timestep placed_at;
        std::uint64_t seq;
    };
    std::vector<Entry> orders;
    std::uint64_t seq = 0;

    std::optional<double> best(bool bid) const {
        std::optional<double> out;
        for (const auto& e : orders)
            if (e.bid == bid && (!out || (bid ? e.price > *out : e.price < *out))) out = e.price;
        return out;
    }

    void remove_best(bool bid) {
        auto top = best(bid);
        auto pick = orders.end();
        for (auto it = orders.begin(); it != orders.end(); ++it) {
            if (it->bid != bid || it->price != *top) continue;
            if (pick == orders.end() || it->placed_at < pick->placed_at ||
                (it->placed_at == pick->placed_at && it->seq < pick->seq))
                pick = it;
        }
        orders.erase(pick);
    }

    std::optional<double> submit(double signed_price, Timestep t) {
        const bool buy = signed_price > 0;
        const double price = std::abs(signed_price);
        auto opposite = best(!buy);
        const bool rests = !opposite || (buy ? price < *opposite : price > *opposite);
        if (rests) {
            orders.push_back({buy, price, t, seq++});
            return std::nullopt;
        }
        remove_best(!buy);
        return opposite;
    }

    void expire(int tau, Timestep t) {
        std::erase_if(orders, [&](const Entry& e) { return e.placed_at <= t - tau; });
    }
};

OrderBook book_with(std::initializer_list<double> bids, std::initializer_list<double> asks,
                    Timestep t = 0) {
    OrderBook book;
    for (double p : bids) book.rest(Side::Bid, p, t);
    for (double p : asks) book.rest(Side::Ask, p, t);
    return book;
}

}  // namespace

TEST_CASE("best bid and best ask") {
    OrderBook empty;
    CHECK_FALSE(empty.best_bid());
    CHECK_FALSE(empty.best_ask());

    CHECK(*book_with({99, 101}, {}).best_bid() == 101);
    CHECK(*book_with({}, {102, 105}).best_ask() == 102);

    auto book = book_with({}, {102});
    CHECK_FALSE(book.submit(-101, 1, 1));
    CHECK(*book.best_ask() == 101);
}

TEST_CASE("best bid is absent once expiry removes the only bid") {
    OrderBook book;
    book.rest(Side::Bid, 100, 2);
    book.expire_orders(8, 10);
    CHECK_FALSE(book.best_bid());
}

TEST_CASE("mid point") {
    CHECK(*book_with({100}, {102}).mid_point() == 101);
    CHECK_FALSE(book_with({100, 98}, {}).mid_point());
    CHECK(*book_with({99}, {101, 103}).mid_point() == 100);
}

TEST_CASE("submit executes against the opposite best or rests") {
    SUBCASE("buy crossing the ask trades at the ask") {
        auto book = book_with({}, {101});
        auto trade = book.submit(102, 1, 5);
        REQUIRE(trade);
        CHECK(*trade == 101);
        CHECK(book.empty());
    }
    SUBCASE("buy below the ask rests") {
        auto book = book_with({}, {101});
        CHECK_FALSE(book.submit(100, 1, 5));
        CHECK(*book.best_bid() == 100);
        CHECK(book.size() == 2);
    }
    SUBCASE("sell through the bid trades at the bid") {
        auto book = book_with({99}, {});
        auto trade = book.submit(-98, 1, 5);
        REQUIRE(trade);
        CHECK(*trade == 99);
        CHECK(book.empty());
    }
    SUBCASE("buy at exactly the best ask executes") {
        // The crossing test is strict: rest only when price < best ask.
        auto book = book_with({}, {101});
        CHECK(book.submit(101, 1, 5));
    }
    SUBCASE("sell at exactly the best bid executes") {
        auto book = book_with({99}, {});
        CHECK(book.submit(-99, 1, 5));
    }
    SUBCASE("empty book always rests") {
        OrderBook book;
        CHECK_FALSE(book.submit(50, 1, 0));
        CHECK_FALSE(book.submit(-60, 1, 0));
        CHECK(book.bid_count() == 1);
        CHECK(book.ask_count() == 1);
    }
}

TEST_CASE("submit rejects a zero price and non-unit sizes") {
    OrderBook book;
    CHECK_THROWS_AS(book.submit(0.0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(book.submit(100.0, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(book.submit(std::nan(""), 1, 0), std::invalid_argument);
    CHECK(book.empty());
}

TEST_CASE("equal prices fill in time order") {
    OrderBook book;
    book.rest(Side::Ask, 101, 3);
    book.rest(Side::Ask, 101, 1);
    book.rest(Side::Ask, 101, 2);
    book.submit(200, 1, 4);
    const auto asks = book.asks();
    REQUIRE(asks.size() == 2);
    CHECK(asks[0].placed_at == 2);
    CHECK(asks[1].placed_at == 3);
}

TEST_CASE("expire_orders uses the t - tau cutoff") {
    OrderBook book;
    for (Timestep p : {1, 2, 3, 9}) book.rest(Side::Bid, 100.0 - p, p);

    SUBCASE("cutoff 2 removes orders placed at 1 and 2") {
        book.expire_orders(8, 10);
        std::vector<Timestep> left;
        for (const auto& o : book.bids()) left.push_back(o.placed_at);
        std::sort(left.begin(), left.end());
        CHECK(left == std::vector<Timestep>{3, 9});
    }
    SUBCASE("cutoff below every timestamp keeps everything") {
        book.expire_orders(8, 5);
        CHECK(book.size() == 4);
    }
    SUBCASE("fresh orders never expire") {
        OrderBook fresh;
        for (int i = 0; i < 3; ++i) fresh.rest(Side::Ask, 100.0 + i, 7);
        fresh.expire_orders(1, 7);
        CHECK(fresh.size() == 3);
    }
    CHECK_THROWS_AS(book.expire_orders(0, 10), std::invalid_argument);
}

TEST_CASE("order ids are unique") {
    OrderBook book;
    std::vector<std::uint64_t> ids;
    for (int i = 0; i < 20; ++i) ids.push_back(book.rest(i % 2 ? Side::Bid : Side::Ask, 50 + i, 0));
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("csv dump lists bids then asks best-first") {
    auto book = book_with({99, 100}, {103, 101}, 4);
    std::ostringstream out;
    book.write_csv(out);
    CHECK(out.str() == "side,price,placed_at\nBID,100,4\nBID,99,4\nASK,101,4\nASK,103,4\n");
}

TEST_CASE("property: random operation sequences agree with the reference model") {
    for (std::uint32_t seed = 1; seed <= 200; ++seed) {
        std::mt19937 gen(seed);
        std::uniform_real_distribution<double> price(90.0, 110.0);
        std::uniform_int_distribution<int> tau_dist(1, 6);
        std::bernoulli_distribution buy(0.5);

        OrderBook book;
        ReferenceBook ref;
        const int tau = tau_dist(gen);
        for (Timestep t = 0; t < 60; ++t) {
            for (int k = 0; k < 3; ++k) {
                const double p = price(gen);
                const double signed_price = buy(gen) ? p : -p;
                const auto before = book.size();
                const auto trade = book.submit(signed_price, 1, t);
                const auto expected = ref.submit(signed_price, t);

                REQUIRE(trade.has_value() == expected.has_value());
                if (trade) CHECK(*trade == *expected);
                // Conservation: exactly one order added or exactly one removed.
                CHECK(book.size() == (trade ? before - 1 : before + 1));
                if (!trade && book.best_bid() && book.best_ask())
                    CHECK(*book.best_bid() < *book.best_ask());
                if (auto mid = book.mid_point(); mid && *book.best_bid() != *book.best_ask()) {
                    CHECK(*mid > *book.best_bid());
                    CHECK(*mid < *book.best_ask());
                }
            }
            book.expire_orders(tau, t);
            ref.expire(tau, t);
            const auto size_after = book.size();
            book.expire_orders(tau, t);
            CHECK(book.size() == size_after);  // idempotent
            for (const auto& side : {book.bids(), book.asks()})
                for (const auto& o : side) CHECK(o.placed_at > t - tau);
            REQUIRE(book.size() == ref.orders.size());
            CHECK(book.best_bid() == ref.best(true));
            CHECK(book.best_ask() == ref.best(false));
        }
    }
}
