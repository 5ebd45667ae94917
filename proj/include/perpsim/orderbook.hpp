#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

namespace perpsim {

using Timestep = std::int64_t;

enum class Side { Bid, Ask };

struct Order {
    std::uint64_t id = 0;
    Side side = Side::Bid;
    double price = 0.0;
    int size = 1;
    Timestep placed_at = 0;
};

/// Limit order book with price-time priority. Every order has unit size, so
/// a crossing order consumes exactly one resting order and never partially
/// fills.
class OrderBook {
public:
    std::optional<double> best_bid() const;
    std::optional<double> best_ask() const;

    /// (best_bid + best_ask) / 2, absent when either side is empty.
    std::optional<double> mid_point() const;

    /// Signed-price order entry: a positive price is a buy, a negative price
    /// is a sell at |price|. A buy strictly below the best ask (or into an
    /// empty ask side) rests as a bid; otherwise it executes against the best
    /// ask and the ask price is returned. Sells mirror this against the best
    /// bid. Throws std::invalid_argument for a zero or non-finite price or a
    /// size other than 1.
    std::optional<double> submit(double signed_price, int size, Timestep t);

    /// Rests a limit order without matching. Used to seed the book.
    std::uint64_t rest(Side side, double price, Timestep placed_at);

    /// Removes every order with placed_at <= t - tau.
    void expire_orders(int tau, Timestep t);

    std::size_t bid_count() const { return bids_.size(); }
    std::size_t ask_count() const { return asks_.size(); }
    std::size_t size() const { return bids_.size() + asks_.size(); }
    bool empty() const { return size() == 0; }

    /// Resting orders best-first.
    std::vector<Order> bids() const { return {bids_.begin(), bids_.end()}; }
    std::vector<Order> asks() const { return {asks_.begin(), asks_.end()}; }

    /// Debug dump: header `side,price,placed_at`, bids then asks, best-first.
    void write_csv(std::ostream& out) const;

private:
    struct BidOrder {
        bool operator()(const Order& a, const Order& b) const {
            if (a.price != b.price) return a.price > b.price;
            if (a.placed_at != b.placed_at) return a.placed_at < b.placed_at;
            return a.id < b.id;
        }
    };
    struct AskOrder {
        bool operator()(const Order& a, const Order& b) const {
            if (a.price != b.price) return a.price < b.price;
            if (a.placed_at != b.placed_at) return a.placed_at < b.placed_at;
            return a.id < b.id;
        }
    };

    std::set<Order, BidOrder> bids_;
    std::set<Order, AskOrder> asks_;
    std::uint64_t next_id_ = 1;
};

}  // namespace perpsim
