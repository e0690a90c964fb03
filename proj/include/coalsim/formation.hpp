#ifndef COALSIM_FORMATION_HPP
#define COALSIM_FORMATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "coalsim/beamforming.hpp"
#include "coalsim/rates.hpp"
#include "coalsim/scenario.hpp"

namespace coalsim {

/// Deviation-overhead model. SizeProportional charges each deviating
/// player (|S|/K) times its grand-coalition rate, where |S| is the size
/// of the coalition formed by the contemplated merge; Uniform charges
/// 1/K of the grand-coalition rate regardless of size.
struct OverheadModel {
    enum class Kind { Zero, Explicit, SizeProportional, Uniform };
    Kind kind = Kind::Zero;
    std::vector<double> explicit_eps;  // used when kind == Explicit

    static OverheadModel zero() { return {}; }
    static OverheadModel uniform() { return {Kind::Uniform, {}}; }
    static OverheadModel size_proportional() { return {Kind::SizeProportional, {}}; }
    static OverheadModel explicit_eps_vector(std::vector<double> eps);
};

const char* to_string(OverheadModel::Kind k);
OverheadModel::Kind overhead_kind_from_string(const std::string& s);

/// Two-bit negotiation messages: utility improves / same / decreases,
/// and the broadcast that a coalition formed.
enum class Message { M1, M2, M3, M4 };

const char* to_string(Message m);

struct MemberOutcome {
    LinkId player = 0;
    Message message = Message::M1;
    double util_before = 0.0;  // in the pre-merge structure
    double util_after = 0.0;   // in the tentatively merged structure
    double eps = 0.0;
};

/// One accepted merge during coalition formation.
struct DeviationEvent {
    int step = 0;                        // 1-based merge index
    std::vector<Coalition> merged;       // the set T that merged
    CoalitionStructure result;
    std::vector<MemberOutcome> members;  // M1/M2 outcomes of the union of T
    std::vector<LinkId> informed;        // outsiders receiving M4
    long long n_iter_at = 0;             // candidate counter when the merge fired
    long long theta_at = 0;              // utility-comparison counter ditto
};

struct FormationResult {
    CoalitionStructure final_structure;
    long long theta = 0;    // total utility comparisons
    long long n_iter = 0;   // candidate sets examined
    std::vector<DeviationEvent> trace;

    nlohmann::json to_json() const;
};

/// Per-player overhead vector for a contemplated merge into a coalition
/// of size merged_size. grand_rates are the rates under the
/// grand-coalition profile of the scheme in use.
std::vector<double> resolve_overheads(const OverheadModel& model, int merged_size,
                                      const std::vector<double>& grand_rates);
std::vector<double> resolve_overheads(const OverheadModel& model, int merged_size,
                                      const ChannelSet& ch, NoisePower noise, BfScheme bf);

/// Merges the coalitions in T (all of which must be present in cs) into
/// a single coalition; the result is canonical.
CoalitionStructure q_deviate(const CoalitionStructure& cs, const std::vector<Coalition>& T);

/// Pareto dominance of the merged structure cs1 over cs0 from the
/// viewpoint of the members of the merging set T: nobody drops below
/// its old utility minus its overhead, and somebody strictly improves.
bool pareto_dominates(const CoalitionStructure& cs0, const CoalitionStructure& cs1,
                      const std::vector<Coalition>& T, const std::vector<double>& eps,
                      const ChannelSet& ch, NoisePower noise, BfScheme bf);

/// All r-subsets of {1..m} in lexicographic order. Empty when r > m.
std::vector<std::vector<int>> lex_r_combinations(int m, int r);

/// Merge-based coalition formation from the all-singleton structure:
/// scans lexicographic r-combinations of coalition indices for
/// r = min(q,|CS|) down to 2, merges the first Pareto-admissible
/// candidate, and restarts until no merge is admissible or the grand
/// coalition forms.
FormationResult run_formation(const ChannelSet& ch, NoisePower noise,
                              const OverheadModel& model, int q, BfScheme bf);

/// Exhaustive check that no merge of at most q coalitions of cs
/// Pareto-dominates cs. The acceptance oracle for run_formation.
bool verify_stable(const CoalitionStructure& cs, int q, const OverheadModel& model,
                   const ChannelSet& ch, NoisePower noise, BfScheme bf);

}  // namespace coalsim

#endif  // COALSIM_FORMATION_HPP
