#include "coalsim/core_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coalsim/format.hpp"

namespace coalsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_subset_cap(int K, int cap) {
    if (K > cap)
        throw std::invalid_argument(
            "core analysis: K exceeds the subset enumeration cap (2^K blowup)");
}

void check_eps(const std::vector<double>& eps, int K) {
    if (static_cast<int>(eps.size()) != K)
        throw std::invalid_argument("core analysis: eps vector must have K entries");
    for (double e : eps)
        if (e < 0.0) throw std::invalid_argument("core analysis: overheads must be >= 0");
}

// Interference powers received at i from MRT transmitter j, and squared
// direct-channel norms, precomputed once per report.
struct MrtTable {
    std::vector<std::vector<double>> b;  // b[j-1][i-1] = |h_ji^H w_j^MRT|^2
    std::vector<double> norm_h2;         // ||h_ii||^2

    explicit MrtTable(const ChannelSet& ch) {
        const int K = ch.num_links();
        b.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(K)));
        norm_h2.resize(static_cast<std::size_t>(K));
        for (LinkId j = 1; j <= K; ++j) {
            Eigen::VectorXcd w = mrt(ch.channel(j, j));
            for (LinkId i = 1; i <= K; ++i)
                b[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] =
                    std::norm(ch.channel(j, i).dot(w));
            norm_h2[static_cast<std::size_t>(j - 1)] = ch.channel(j, j).squaredNorm();
        }
    }

    double outside_interference(LinkId i, std::uint32_t mask) const {
        double s = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!(mask >> j & 1u))
                s += b[j][static_cast<std::size_t>(i - 1)];
        return s;
    }
};

CoalitionParams make_params(double A, double B, double C, double eps) {
    CoalitionParams p;
    p.A = A;
    p.B = B;
    p.C = C;
    double g = std::exp2(eps);
    p.Psi = g * (B + C) - (B + A);
    p.Delta = p.Psi * p.Psi - 4.0 * (g - 1.0) * g * C * B;
    return p;
}

double zf_signal_power(LinkId i, const Coalition& S, const ChannelSet& ch) {
    return std::norm(ch.channel(i, i).dot(zf(i, S, ch)));
}

CoreReport build_report(const ChannelSet& ch, const std::vector<double>& eps,
                        CoreFlavor flavor, int cap) {
    const int K = ch.num_links();
    check_subset_cap(K, cap);
    check_eps(eps, K);

    CoreReport rep;
    rep.flavor = flavor;
    rep.eps = eps;
    rep.sigma_bar = kInf;
    rep.sigma_underbar = 0.0;

    MrtTable mrt_table(ch);
    Coalition grand = CoalitionStructure::grand(K).coalitions.front();
    std::vector<double> C_i(static_cast<std::size_t>(K));
    for (LinkId i = 1; i <= K; ++i)
        C_i[static_cast<std::size_t>(i - 1)] = zf_signal_power(i, grand, ch);

    for (std::uint32_t mask : subset_masks(K, 1, K - 1)) {
        Coalition S = coalition_from_mask(mask);
        for (LinkId i : S.members) {
            CorePairEntry e;
            e.player = i;
            e.coalition_mask = mask;
            e.eps_effective = flavor == CoreFlavor::Strong
                                  ? eps[static_cast<std::size_t>(i - 1)] / S.size()
                                  : eps[static_cast<std::size_t>(i - 1)];
            double A = zf_signal_power(i, S, ch);
            double B = mrt_table.outside_interference(i, mask);
            e.params = make_params(A, B, C_i[static_cast<std::size_t>(i - 1)], e.eps_effective);
            e.bounds = per_pair_condition_set(e.params, e.eps_effective);
            rep.sigma_bar = std::min(rep.sigma_bar, e.bounds.upper);
            rep.sigma_underbar = std::max(rep.sigma_underbar, e.bounds.lower);
            rep.pairs.push_back(std::move(e));
        }
    }
    return rep;
}

}  // namespace

std::vector<std::uint32_t> subset_masks(int K, int min_size, int max_size) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 1; m < (1u << K); ++m) {
        int s = std::popcount(m);
        if (s >= min_size && s <= max_size) masks.push_back(m);
    }
    // by size, then lexicographic on the member list (== ascending mask)
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return masks;
}

Coalition coalition_from_mask(std::uint32_t mask) {
    std::vector<LinkId> members;
    for (int k = 0; k < 32; ++k)
        if (mask >> k & 1u) members.push_back(k + 1);
    return Coalition(std::move(members));
}

bool SigmaBounds::contains(double sigma2) const {
    switch (kind) {
        case Kind::AllSigma: return true;
        case Kind::UpperOnly: return sigma2 <= upper;
        case Kind::OutsideInterval: return sigma2 <= upper || sigma2 >= lower;
    }
    return false;
}

CoalitionParams coalition_params(LinkId i, const Coalition& S, const ChannelSet& ch,
                                 double eps_i) {
    if (!S.contains(i)) throw std::invalid_argument("coalition_params: i must be in S");
    const int K = ch.num_links();
    if (S.size() >= K) throw std::invalid_argument("coalition_params: S must be a proper subset");
    MrtTable mrt_table(ch);
    std::uint32_t mask = 0;
    for (LinkId j : S.members) mask |= 1u << (j - 1);
    Coalition grand = CoalitionStructure::grand(K).coalitions.front();
    return make_params(zf_signal_power(i, S, ch), mrt_table.outside_interference(i, mask),
                       zf_signal_power(i, grand, ch), eps_i);
}

SigmaBounds per_pair_condition_set(const CoalitionParams& p, double eps_i) {
    if (eps_i < 0.0) throw std::invalid_argument("per_pair_condition_set: eps must be >= 0");
    SigmaBounds b;
    if (eps_i == 0.0) {
        // f is the line (C - A) sigma^2 + C B
        if (p.A <= p.C) {
            b.kind = SigmaBounds::Kind::AllSigma;
            b.upper = kInf;
        } else {
            b.kind = SigmaBounds::Kind::UpperOnly;
            b.upper = p.C * p.B / (p.A - p.C);
        }
        return b;
    }
    double delta = p.Delta;
    // near-double-root: cancellation can push Delta slightly negative
    if (std::abs(delta) <= 1e-12 * p.Psi * p.Psi) delta = 0.0;
    if (delta < 0.0 || p.Psi >= 0.0) {
        b.kind = SigmaBounds::Kind::AllSigma;
        b.upper = kInf;
        return b;
    }
    double a2 = 2.0 * (std::exp2(eps_i) - 1.0);
    double root = std::sqrt(delta);
    b.kind = SigmaBounds::Kind::OutsideInterval;
    b.upper = (-p.Psi - root) / a2;  // smaller root
    b.lower = (-p.Psi + root) / a2;  // larger root
    return b;
}

bool CoreReport::nonempty_at(double sigma2) const {
    for (const auto& e : pairs)
        if (!e.bounds.contains(sigma2)) return false;
    return true;
}

bool CoreReport::nonempty_for_all_sigma() const {
    for (const auto& e : pairs)
        if (e.bounds.kind != SigmaBounds::Kind::AllSigma) return false;
    return true;
}

nlohmann::json CoreReport::to_json() const {
    nlohmann::json j;
    j["flavor"] = flavor == CoreFlavor::Weak ? "weak" : "strong";
    j["eps"] = eps;
    j["sigma_bar"] = std::isinf(sigma_bar) ? nlohmann::json("inf") : nlohmann::json(sigma_bar);
    j["sigma_underbar"] = sigma_underbar;
    nlohmann::json table = nlohmann::json::array();
    for (const auto& e : pairs) {
        nlohmann::json row;
        row["player"] = e.player;
        row["coalition_mask"] = e.coalition_mask;
        row["eps_effective"] = e.eps_effective;
        row["A"] = e.params.A;
        row["B"] = e.params.B;
        row["C"] = e.params.C;
        row["Psi"] = e.params.Psi;
        row["Delta"] = e.params.Delta;
        switch (e.bounds.kind) {
            case SigmaBounds::Kind::AllSigma: row["condition"] = "all"; break;
            case SigmaBounds::Kind::UpperOnly: row["condition"] = "upper_only"; break;
            case SigmaBounds::Kind::OutsideInterval: row["condition"] = "outside_interval"; break;
        }
        row["lower"] = e.bounds.lower;
        row["upper"] = std::isinf(e.bounds.upper) ? nlohmann::json("inf")
                                                  : nlohmann::json(e.bounds.upper);
        table.push_back(std::move(row));
    }
    j["pairs"] = std::move(table);
    return j;
}

std::string CoreReport::to_csv() const {
    std::ostringstream out;
    out << "player,coalition_mask,A,B,C,Psi,Delta,lower,upper\n";
    for (const auto& e : pairs) {
        out << e.player << ',' << e.coalition_mask << ',' << format_double(e.params.A) << ','
            << format_double(e.params.B) << ',' << format_double(e.params.C) << ','
            << format_double(e.params.Psi) << ',' << format_double(e.params.Delta) << ','
            << format_double(e.bounds.lower) << ',' << format_double(e.bounds.upper) << '\n';
    }
    return out.str();
}

CoreReport weak_core_report(const ChannelSet& ch, const std::vector<double>& eps, int cap) {
    return build_report(ch, eps, CoreFlavor::Weak, cap);
}

CoreReport strong_core_report(const ChannelSet& ch, const std::vector<double>& eps, int cap) {
    return build_report(ch, eps, CoreFlavor::Strong, cap);
}

bool core_nonempty_bruteforce(const ChannelSet& ch, const std::vector<double>& eps,
                              NoisePower noise, CoreFlavor flavor, int cap) {
    const int K = ch.num_links();
    check_subset_cap(K, cap);
    check_eps(eps, K);
    Coalition grand = CoalitionStructure::grand(K).coalitions.front();
    std::vector<double> u_grand =
        rates_all(profile_for_coalition(grand, ch, noise, BfScheme::ZF), ch, noise);
    for (std::uint32_t mask : subset_masks(K, 1, K - 1)) {
        Coalition S = coalition_from_mask(mask);
        StrategyProfile p = profile_for_coalition(S, ch, noise, BfScheme::ZF);
        for (LinkId i : S.members) {
            double e = flavor == CoreFlavor::Strong
                           ? eps[static_cast<std::size_t>(i - 1)] / S.size()
                           : eps[static_cast<std::size_t>(i - 1)];
            if (rate(i, p, ch, noise) - e > u_grand[static_cast<std::size_t>(i - 1)])
                return false;
        }
    }
    return true;
}

bool weak_core_nonempty_bruteforce(const ChannelSet& ch, const std::vector<double>& eps,
                                   NoisePower noise, int cap) {
    return core_nonempty_bruteforce(ch, eps, noise, CoreFlavor::Weak, cap);
}

double singleton_threshold(const ChannelSet& ch) {
    const int K = ch.num_links();
    if (K < 2) throw std::invalid_argument("singleton_threshold: needs K >= 2");
    check_subset_cap(K, 16);
    MrtTable t(ch);
    bool any = false;
    double best = 0.0;
    for (std::uint32_t mask : subset_masks(K, 2, K)) {
        Coalition S = coalition_from_mask(mask);
        for (LinkId i : S.members) {
            double A = zf_signal_power(i, S, ch);
            double norm_h2 = t.norm_h2[static_cast<std::size_t>(i - 1)];
            double den = norm_h2 - A;
            // A >= ||h_ii||^2: ZF costs this player nothing here, no
            // finite lower bound arises from the pair
            if (den <= 0.0) continue;
            double B_S = t.outside_interference(i, mask);
            double B_single = t.outside_interference(i, 1u << (i - 1));
            double candidate = (A * B_single - norm_h2 * B_S) / den;
            best = any ? std::max(best, candidate) : candidate;
            any = true;
        }
    }
    return any ? best : 0.0;
}

double cost_of_stability(const ChannelSet& ch, NoisePower noise) {
    if (noise.sigma2 <= 0.0)
        throw std::invalid_argument("cost_of_stability: sigma^2 must be positive");
    const int K = ch.num_links();
    auto nonempty = [&](double e) {
        return weak_core_nonempty_bruteforce(ch, std::vector<double>(static_cast<std::size_t>(K), e),
                                             noise);
    };
    if (nonempty(0.0)) return 0.0;
    double hi = 1.0;
    while (!nonempty(hi)) {
        hi *= 2.0;
        if (hi > 1e12)
            throw std::runtime_error("cost_of_stability: no stabilizing overhead found");
    }
    double lo = 0.0;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (nonempty(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace coalsim
