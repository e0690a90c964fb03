#ifndef COALSIM_SCENARIO_HPP
#define COALSIM_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace coalsim {

/// 1-based link index in [1..K].
using LinkId = int;

/// Noise power sigma^2 in linear units.
struct NoisePower {
    double sigma2 = 1.0;
};

/// All channel vectors h_ij of one realization. h(i,j) is the channel
/// from transmitter i to receiver j and has length N_i.
class ChannelSet {
  public:
    ChannelSet(int num_links, std::vector<int> antennas);

    int num_links() const { return K_; }
    int antennas(LinkId i) const { return antennas_[static_cast<std::size_t>(i - 1)]; }

    const Eigen::VectorXcd& channel(LinkId tx, LinkId rx) const;
    Eigen::VectorXcd& channel(LinkId tx, LinkId rx);

  private:
    int K_;
    std::vector<int> antennas_;
    std::vector<Eigen::VectorXcd> h_;
};

/// Topology description: link count, antenna counts and (optionally)
/// planar transmitter/receiver positions with a path-loss exponent.
struct Scenario {
    int K = 0;
    std::vector<int> antennas;                         // N_i >= 2, size K
    std::vector<std::array<double, 2>> tx_positions;   // empty or size K, meters
    std::vector<std::array<double, 2>> rx_positions;
    double pathloss_exponent = 3.0;

    bool has_positions() const { return !tx_positions.empty(); }
    double distance(LinkId tx, LinkId rx) const;

    /// Common direct distance d_kk shared by all links (1 when no
    /// positions are given). Throws if the d_kk differ, since the SNR
    /// definition would be ambiguous.
    double direct_distance() const;

    /// Throws std::invalid_argument on malformed scenarios
    /// (K < 1, N_i < 2, coinciding tx/rx positions, size mismatches).
    void validate() const;

    static Scenario iid(int num_links, int num_antennas);
    static Scenario from_json(const nlohmann::json& j);
    static Scenario from_file(const std::string& path);
};

/// sigma^2 = d_ref^{-delta} / snr  (snr is a linear ratio).
NoisePower snr_to_sigma2(const Scenario& sc, double snr);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Draws one channel realization. Pure function of (scenario, seed,
/// realization); distinct realizations use independent substreams.
/// Entries are CN(0,1); with positions each vector is normalized to
/// unit norm and scaled by d_kl^{-delta/2}.
ChannelSet sample_channels(const Scenario& sc, std::uint64_t seed, std::uint64_t realization);

}  // namespace coalsim

#endif  // COALSIM_SCENARIO_HPP
