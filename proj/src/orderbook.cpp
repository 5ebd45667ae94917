#include "perpsim/orderbook.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace perpsim {

std::optional<double> OrderBook::best_bid() const {
    if (bids_.empty()) return std::nullopt;
    return bids_.begin()->price;
}

std::optional<double> OrderBook::best_ask() const {
    if (asks_.empty()) return std::nullopt;
    return asks_.begin()->price;
}

std::optional<double> OrderBook::mid_point() const {
    auto bid = best_bid();
    auto ask = best_ask();
    if (!bid || !ask) return std::nullopt;
    return (*bid + *ask) / 2.0;
}

std::optional<double> OrderBook::submit(double signed_price, int size, Timestep t) {
    if (signed_price == 0.0 || !std::isfinite(signed_price))
        throw std::invalid_argument("submit: signed price must be finite and non-zero");
    if (size != 1) throw std::invalid_argument("submit: order size must be 1");

    if (signed_price > 0.0) {
        auto ask = best_ask();
        if (!ask || signed_price < *ask) {
            rest(Side::Bid, signed_price, t);
            return std::nullopt;
        }
        asks_.erase(asks_.begin());
        return ask;
    }

    const double price = -signed_price;
    auto bid = best_bid();
    if (!bid || price > *bid) {
        rest(Side::Ask, price, t);
        return std::nullopt;
    }
    bids_.erase(bids_.begin());
    return bid;
}

std::uint64_t OrderBook::rest(Side side, double price, Timestep placed_at) {
    if (!(price > 0.0) || !std::isfinite(price))
        throw std::invalid_argument("rest: price must be positive and finite");
    Order order{next_id_++, side, price, 1, placed_at};
    if (side == Side::Bid)
        bids_.insert(order);
    else
        asks_.insert(order);
    return order.id;
}

void OrderBook::expire_orders(int tau, Timestep t) {
    if (tau < 1) throw std::invalid_argument("expire_orders: tau must be >= 1");
    const Timestep cutoff = t - tau;
    std::erase_if(bids_, [cutoff](const Order& o) { return o.placed_at <= cutoff; });
    std::erase_if(asks_, [cutoff](const Order& o) { return o.placed_at <= cutoff; });
}

void OrderBook::write_csv(std::ostream& out) const {
    out << "side,price,placed_at\n";
    for (const auto& o : bids_) out << "BID," << o.price << ',' << o.placed_at << '\n';
    for (const auto& o : asks_) out << "ASK," << o.price << ',' << o.placed_at << '\n';
}

}  // namespace perpsim
