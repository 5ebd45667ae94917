#include "perpsim/price_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace perpsim {

SpotMode parse_spot_mode(std::string_view name) {
    if (name == "geometric") return SpotMode::Geometric;
    if (name == "additive") return SpotMode::Additive;
    throw std::invalid_argument("spot_mode must be 'geometric' or 'additive', got '" +
                                std::string(name) + "'");
}

std::string_view to_string(SpotMode mode) {
    return mode == SpotMode::Geometric ? "geometric" : "additive";
}

void SpotParams::validate() const {
    if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(t1 > t0)) throw std::invalid_argument("t1 must be > t0");
    if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
}

std::vector<double> generate_spot_path(const SpotParams& params, Rng& rng) {
    params.validate();
    const double dt = params.dt();
    const double vol = params.sigma * std::sqrt(dt);
    const double drift = params.mode == SpotMode::Geometric
                             ? (params.mu - 0.5 * params.sigma * params.sigma) * dt
                             : params.mu * dt;

    std::vector<double> path(static_cast<std::size_t>(params.n_steps) + 1);
    path[0] = params.s0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double eps = rng.normal();
        if (params.mode == SpotMode::Geometric)
            path[k] = path[k - 1] * std::exp(drift + vol * eps);
        else
            path[k] = std::max(path[k - 1] + drift + vol * eps, kAdditivePriceFloor);
    }
    return path;
}

}  // namespace perpsim
