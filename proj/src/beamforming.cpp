#include "coalsim/beamforming.hpp"

#include <algorithm>
#include <stdexcept>

namespace coalsim {

const char* to_string(BfScheme bf) { return bf == BfScheme::ZF ? "ZF" : "WF"; }

BfScheme bf_from_string(const std::string& s) {
    if (s == "ZF" || s == "zf") return BfScheme::ZF;
    if (s == "WF" || s == "wf") return BfScheme::WF;
    throw std::invalid_argument("unknown beamforming scheme: " + s);
}

Coalition::Coalition(std::vector<LinkId> m) : members(std::move(m)) {
    if (members.empty()) throw std::invalid_argument("coalition must be nonempty");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool Coalition::contains(LinkId i) const {
    return std::binary_search(members.begin(), members.end(), i);
}

void CoalitionStructure::canonicalize() {
    for (auto& c : coalitions) std::sort(c.members.begin(), c.members.end());
    std::sort(coalitions.begin(), coalitions.end(),
              [](const Coalition& a, const Coalition& b) {
                  return a.members.front() < b.members.front();
              });
}

bool CoalitionStructure::is_partition_of(int K) const {
    std::vector<bool> seen(static_cast<std::size_t>(K), false);
    for (const auto& c : coalitions) {
        if (c.members.empty()) return false;
        for (LinkId i : c.members) {
            if (i < 1 || i > K || seen[static_cast<std::size_t>(i - 1)]) return false;
            seen[static_cast<std::size_t>(i - 1)] = true;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

int CoalitionStructure::coalition_of(LinkId i) const {
    for (std::size_t k = 0; k < coalitions.size(); ++k)
        if (coalitions[k].contains(i)) return static_cast<int>(k);
    return -1;
}

CoalitionStructure CoalitionStructure::singletons(int K) {
    CoalitionStructure cs;
    for (LinkId i = 1; i <= K; ++i) cs.coalitions.push_back(Coalition({i}));
    return cs;
}

CoalitionStructure CoalitionStructure::grand(int K) {
    std::vector<LinkId> all(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    CoalitionStructure cs;
    cs.coalitions.push_back(Coalition(std::move(all)));
    return cs;
}

Beamformer mrt(const Eigen::VectorXcd& h_ii) {
    double n = h_ii.norm();
    if (n <= 0.0) throw std::invalid_argument("mrt: direct channel is zero");
    return h_ii / n;
}

Beamformer zf(LinkId i, const Coalition& S, const ChannelSet& ch) {
    if (!S.contains(i)) throw std::invalid_argument("zf: i must be a member of S");
    const Eigen::VectorXcd& h_ii = ch.channel(i, i);
    if (h_ii.norm() <= 0.0) throw std::invalid_argument("zf: direct channel is zero");
    if (S.size() == 1) return mrt(h_ii);

    const int N = ch.antennas(i);
    if (N < S.size()) return Eigen::VectorXcd::Zero(N);  // switched off

    Eigen::MatrixXcd Z(N, S.size() - 1);
    int col = 0;
    for (LinkId j : S.members)
        if (j != i) Z.col(col++) = ch.channel(i, j);

    // Null-space projection through an orthonormal basis of range(Z);
    // survives rank-deficient cross channels where (Z^H Z)^{-1} would not.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::Index r = qr.rank();
    Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(N, r);
    Eigen::VectorXcd w = h_ii - Q * (Q.adjoint() * h_ii);

    double n = w.norm();
    if (n <= 1e-12 * h_ii.norm()) return Eigen::VectorXcd::Zero(N);
    return w / n;
}

Beamformer wf(LinkId i, const Coalition& S, const ChannelSet& ch, NoisePower noise) {
    if (!S.contains(i)) throw std::invalid_argument("wf: i must be a member of S");
    if (noise.sigma2 <= 0.0)
        throw std::invalid_argument("wf: sigma^2 must be positive (use zf at zero noise)");
    const Eigen::VectorXcd& h_ii = ch.channel(i, i);
    if (S.size() == 1) return mrt(h_ii);

    const int N = ch.antennas(i);
    Eigen::MatrixXcd M = noise.sigma2 * Eigen::MatrixXcd::Identity(N, N);
    for (LinkId j : S.members)
        if (j != i) M.selfadjointView<Eigen::Lower>().rankUpdate(ch.channel(i, j));
    Eigen::VectorXcd w = Eigen::MatrixXcd(M.selfadjointView<Eigen::Lower>()).ldlt().solve(h_ii);
    return w / w.norm();
}

namespace {

Beamformer scheme_beamformer(LinkId i, const Coalition& S, const ChannelSet& ch,
                             NoisePower noise, BfScheme bf) {
    if (S.size() == 1) return mrt(ch.channel(i, i));
    return bf == BfScheme::ZF ? zf(i, S, ch) : wf(i, S, ch, noise);
}

}  // namespace

StrategyProfile profile_for_coalition(const Coalition& S, const ChannelSet& ch,
                                      NoisePower noise, BfScheme bf) {
    StrategyProfile p(static_cast<std::size_t>(ch.num_links()));
    for (LinkId i = 1; i <= ch.num_links(); ++i) {
        p[static_cast<std::size_t>(i - 1)] = S.contains(i)
                                                 ? scheme_beamformer(i, S, ch, noise, bf)
                                                 : mrt(ch.channel(i, i));
    }
    return p;
}

StrategyProfile profile_for_structure(const CoalitionStructure& cs, const ChannelSet& ch,
                                      NoisePower noise, BfScheme bf) {
    if (!cs.is_partition_of(ch.num_links()))
        throw std::invalid_argument("profile_for_structure: not a partition of the link set");
    StrategyProfile p(static_cast<std::size_t>(ch.num_links()));
    for (const Coalition& S : cs.coalitions)
        for (LinkId i : S.members)
            p[static_cast<std::size_t>(i - 1)] = scheme_beamformer(i, S, ch, noise, bf);
    return p;
}

}  // namespace coalsim
