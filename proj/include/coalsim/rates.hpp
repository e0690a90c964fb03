#ifndef COALSIM_RATES_HPP
#define COALSIM_RATES_HPP

#include <vector>

#include "coalsim/beamforming.hpp"
#include "coalsim/scenario.hpp"

namespace coalsim {

/// Achievable rate of link i in bits per channel use:
/// log2(1 + |h_ii^H w_i|^2 / (sum_{j != i} |h_ji^H w_j|^2 + sigma^2)).
double rate(LinkId i, const StrategyProfile& p, const ChannelSet& ch, NoisePower noise);

std::vector<double> rates_all(const StrategyProfile& p, const ChannelSet& ch, NoisePower noise);

}  // namespace coalsim

#endif  // COALSIM_RATES_HPP
