#ifndef COALSIM_BEAMFORMING_HPP
#define COALSIM_BEAMFORMING_HPP

#include <vector>

#include <Eigen/Dense>

#include "coalsim/scenario.hpp"

namespace coalsim {

/// A beamforming vector: either unit norm or exactly zero (switched off).
using Beamformer = Eigen::VectorXcd;

/// One beamformer per link, indexed by LinkId - 1.
using StrategyProfile = std::vector<Beamformer>;

enum class BfScheme { ZF, WF };

const char* to_string(BfScheme bf);
BfScheme bf_from_string(const std::string& s);

/// Nonempty set of links willing to cooperate. Members kept sorted.
struct Coalition {
    std::vector<LinkId> members;

    Coalition() = default;
    explicit Coalition(std::vector<LinkId> m);

    int size() const { return static_cast<int>(members.size()); }
    bool contains(LinkId i) const;
    bool operator==(const Coalition&) const = default;
};

/// Partition of {1..K}. Canonical order: coalitions sorted by smallest
/// member, members ascending.
struct CoalitionStructure {
    std::vector<Coalition> coalitions;

    int size() const { return static_cast<int>(coalitions.size()); }
    void canonicalize();
    bool is_partition_of(int K) const;
    /// Index (0-based) of the coalition containing link i, or -1.
    int coalition_of(LinkId i) const;
    bool operator==(const CoalitionStructure&) const = default;

    static CoalitionStructure singletons(int K);
    static CoalitionStructure grand(int K);
};

/// w = h_ii / ||h_ii||.
Beamformer mrt(const Eigen::VectorXcd& h_ii);

/// Zero-forcing beamformer of transmitter i toward the receivers in
/// S \ {i}: the direct channel projected onto the null space of the
/// cross channels, normalized. Returns the zero vector when N_i < |S|
/// or when h_ii lies in the span of the cross channels.
Beamformer zf(LinkId i, const Coalition& S, const ChannelSet& ch);

/// Wiener-filter precoder: (I sigma^2 + sum_{j in S\{i}} h_ij h_ij^H)^{-1} h_ii,
/// normalized. Requires sigma^2 > 0.
Beamformer wf(LinkId i, const Coalition& S, const ChannelSet& ch, NoisePower noise);

/// Members of S use the scheme toward S, everyone else uses MRT.
StrategyProfile profile_for_coalition(const Coalition& S, const ChannelSet& ch,
                                      NoisePower noise, BfScheme bf);

/// Every link uses the scheme toward its own coalition; singletons
/// reduce to MRT.
StrategyProfile profile_for_structure(const CoalitionStructure& cs, const ChannelSet& ch,
                                      NoisePower noise, BfScheme bf);

}  // namespace coalsim

#endif  // COALSIM_BEAMFORMING_HPP
