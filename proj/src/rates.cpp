#include "coalsim/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace coalsim {

double rate(LinkId i, const StrategyProfile& p, const ChannelSet& ch, NoisePower noise) {
    if (noise.sigma2 <= 0.0) throw std::invalid_argument("rate: sigma^2 must be positive");
    const auto& w_i = p[static_cast<std::size_t>(i - 1)];
    // Eigen's dot conjugates its left operand: h.dot(w) = h^H w.
    double signal = std::norm(ch.channel(i, i).dot(w_i));
    double interference = 0.0;
    for (LinkId j = 1; j <= ch.num_links(); ++j) {
        if (j == i) continue;
        const auto& w_j = p[static_cast<std::size_t>(j - 1)];
        interference += std::norm(ch.channel(j, i).dot(w_j));
    }
    return std::log2(1.0 + signal / (interference + noise.sigma2));
}

std::vector<double> rates_all(const StrategyProfile& p, const ChannelSet& ch, NoisePower noise) {
    std::vector<double> u(static_cast<std::size_t>(ch.num_links()));
    for (LinkId i = 1; i <= ch.num_links(); ++i)
        u[static_cast<std::size_t>(i - 1)] = rate(i, p, ch, noise);
    return u;
}

}  // namespace coalsim
