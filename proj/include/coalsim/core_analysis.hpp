#ifndef COALSIM_CORE_ANALYSIS_HPP
#define COALSIM_CORE_ANALYSIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "coalsim/beamforming.hpp"
#include "coalsim/rates.hpp"
#include "coalsim/scenario.hpp"

namespace coalsim {

enum class CoreFlavor { Weak, Strong };

/// Closed-form parameters of the per-(player, coalition) deviation
/// inequality with ZF cooperation:
///   A = |h_ii^H w_{i->S}^ZF|^2        (grand-deviation signal power)
///   B = sum_{j notin S} |h_ji^H w_j^MRT|^2
///   C = |h_ii^H w_{i->N}^ZF|^2
///   Psi = 2^eps (B + C) - (B + A)
///   Delta = Psi^2 - 4 (2^eps - 1) 2^eps C B
struct CoalitionParams {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double Psi = 0.0;
    double Delta = 0.0;
};

/// Set of noise powers for which one (i, S) deviation inequality holds.
/// Three shapes arise from the quadratic case analysis:
///   AllSigma       - holds for every sigma^2 > 0
///   UpperOnly      - holds iff sigma^2 <= upper
///   OutsideInterval- holds iff sigma^2 <= upper or sigma^2 >= lower
/// (the Case IV set is the complement of an interval, so lower > upper).
struct SigmaBounds {
    enum class Kind { AllSigma, UpperOnly, OutsideInterval };
    Kind kind = Kind::AllSigma;
    double lower = 0.0;   // sigma_lb: 0 unless OutsideInterval
    double upper = 0.0;   // sigma_ub: +inf when AllSigma

    bool contains(double sigma2) const;
};

struct CorePairEntry {
    LinkId player = 0;
    std::uint32_t coalition_mask = 0;  // bit k-1 set <=> link k in S
    double eps_effective = 0.0;        // eps_i (weak) or eps_i/|S| (strong)
    CoalitionParams params;
    SigmaBounds bounds;
};

/// Full epsilon-core emptiness analysis over all nonempty proper
/// subsets S of {1..K}: per-pair parameters and condition sets plus the
/// aggregated thresholds (min of uppers, max of lowers).
struct CoreReport {
    CoreFlavor flavor = CoreFlavor::Weak;
    std::vector<double> eps;
    std::vector<CorePairEntry> pairs;   // ordered by |S|, then lexicographic
    double sigma_bar = 0.0;             // min-min upper threshold
    double sigma_underbar = 0.0;        // max-max lower threshold

    /// Closed-form verdict: the epsilon-core is nonempty at this noise
    /// power iff every per-pair condition set contains it.
    bool nonempty_at(double sigma2) const;

    /// True iff every pair holds for all sigma^2 (Delta < 0 or Psi >= 0).
    bool nonempty_for_all_sigma() const;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

CoalitionParams coalition_params(LinkId i, const Coalition& S, const ChannelSet& ch,
                                 double eps_i);

SigmaBounds per_pair_condition_set(const CoalitionParams& params, double eps_i);

CoreReport weak_core_report(const ChannelSet& ch, const std::vector<double>& eps,
                            int subset_cap = 16);
CoreReport strong_core_report(const ChannelSet& ch, const std::vector<double>& eps,
                              int subset_cap = 16);

/// Direct verdict from rate comparisons on ZF profiles, independent of
/// the quadratic analysis. This is the oracle for the closed-form path.
bool core_nonempty_bruteforce(const ChannelSet& ch, const std::vector<double>& eps,
                              NoisePower noise, CoreFlavor flavor, int subset_cap = 16);
bool weak_core_nonempty_bruteforce(const ChannelSet& ch, const std::vector<double>& eps,
                                   NoisePower noise, int subset_cap = 16);

/// Noise power above which every link strictly prefers its singleton
/// coalition over any ZF coalition it could be a member of.
double singleton_threshold(const ChannelSet& ch);

/// Smallest uniform overhead eps making the weak eps-core nonempty at
/// the given noise power (bisection against the brute-force verdict,
/// absolute tolerance 1e-6).
double cost_of_stability(const ChannelSet& ch, NoisePower noise);

/// Masks of all nonempty subsets of {1..K} with popcount in
/// [min_size, max_size], ordered by size then lexicographically.
std::vector<std::uint32_t> subset_masks(int K, int min_size, int max_size);

Coalition coalition_from_mask(std::uint32_t mask);

}  // namespace coalsim

#endif  // COALSIM_CORE_ANALYSIS_HPP
