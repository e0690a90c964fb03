#include "coalsim/formation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace coalsim {

namespace {

// "utility is the same" tolerance: ties must not be turned into strict
// improvements by roundoff
Message classify(double util_after, double util_before, double eps) {
    double ref = util_before - eps;
    double tol = 1e-12 * std::max({1.0, std::abs(util_after), std::abs(ref)});
    double diff = util_after - ref;
    if (diff > tol) return Message::M1;
    if (diff >= -tol) return Message::M2;
    return Message::M3;
}

std::vector<LinkId> union_of(const std::vector<Coalition>& T) {
    std::vector<LinkId> u;
    for (const auto& c : T) u.insert(u.end(), c.members.begin(), c.members.end());
    std::sort(u.begin(), u.end());
    return u;
}

Beamformer member_beamformer(LinkId i, const Coalition& S, const ChannelSet& ch,
                             NoisePower noise, BfScheme bf) {
    if (S.size() == 1) return mrt(ch.channel(i, i));
    return bf == BfScheme::ZF ? zf(i, S, ch) : wf(i, S, ch, noise);
}

}  // namespace

OverheadModel OverheadModel::explicit_eps_vector(std::vector<double> eps) {
    for (double e : eps)
        if (e < 0.0) throw std::invalid_argument("overheads must be >= 0");
    return {Kind::Explicit, std::move(eps)};
}

const char* to_string(OverheadModel::Kind k) {
    switch (k) {
        case OverheadModel::Kind::Zero: return "zero";
        case OverheadModel::Kind::Explicit: return "explicit";
        case OverheadModel::Kind::SizeProportional: return "size_proportional";
        case OverheadModel::Kind::Uniform: return "uniform";
    }
    return "?";
}

OverheadModel::Kind overhead_kind_from_string(const std::string& s) {
    if (s == "zero") return OverheadModel::Kind::Zero;
    if (s == "explicit") return OverheadModel::Kind::Explicit;
    if (s == "size_proportional") return OverheadModel::Kind::SizeProportional;
    if (s == "uniform") return OverheadModel::Kind::Uniform;
    throw std::invalid_argument("unknown overhead model: " + s);
}

const char* to_string(Message m) {
    switch (m) {
        case Message::M1: return "M1";
        case Message::M2: return "M2";
        case Message::M3: return "M3";
        case Message::M4: return "M4";
    }
    return "?";
}

std::vector<double> resolve_overheads(const OverheadModel& model, int merged_size,
                                      const std::vector<double>& grand_rates) {
    const auto K = grand_rates.size();
    switch (model.kind) {
        case OverheadModel::Kind::Zero:
            return std::vector<double>(K, 0.0);
        case OverheadModel::Kind::Explicit:
            if (model.explicit_eps.size() != K)
                throw std::invalid_argument("explicit overhead vector must have K entries");
            return model.explicit_eps;
        case OverheadModel::Kind::SizeProportional: {
            std::vector<double> eps(K);
            double f = static_cast<double>(merged_size) / static_cast<double>(K);
            for (std::size_t i = 0; i < K; ++i) eps[i] = f * grand_rates[i];
            return eps;
        }
        case OverheadModel::Kind::Uniform: {
            std::vector<double> eps(K);
            for (std::size_t i = 0; i < K; ++i) eps[i] = grand_rates[i] / static_cast<double>(K);
            return eps;
        }
    }
    throw std::logic_error("unreachable overhead kind");
}

std::vector<double> resolve_overheads(const OverheadModel& model, int merged_size,
                                      const ChannelSet& ch, NoisePower noise, BfScheme bf) {
    std::vector<double> grand_rates;
    if (model.kind == OverheadModel::Kind::SizeProportional ||
        model.kind == OverheadModel::Kind::Uniform) {
        grand_rates = rates_all(
            profile_for_structure(CoalitionStructure::grand(ch.num_links()), ch, noise, bf), ch,
            noise);
    } else {
        grand_rates.assign(static_cast<std::size_t>(ch.num_links()), 0.0);
    }
    return resolve_overheads(model, merged_size, grand_rates);
}

CoalitionStructure q_deviate(const CoalitionStructure& cs, const std::vector<Coalition>& T) {
    if (T.size() < 2) throw std::invalid_argument("q_deviate: need at least two coalitions");
    CoalitionStructure out;
    std::vector<bool> used(T.size(), false);
    for (const auto& c : cs.coalitions) {
        bool in_T = false;
        for (std::size_t t = 0; t < T.size(); ++t) {
            if (!used[t] && T[t] == c) {
                used[t] = true;
                in_T = true;
                break;
            }
        }
        if (!in_T) out.coalitions.push_back(c);
    }
    if (!std::all_of(used.begin(), used.end(), [](bool b) { return b; }))
        throw std::invalid_argument("q_deviate: T is not a subset of the structure");
    out.coalitions.push_back(Coalition(union_of(T)));
    out.canonicalize();
    return out;
}

bool pareto_dominates(const CoalitionStructure& cs0, const CoalitionStructure& cs1,
                      const std::vector<Coalition>& T, const std::vector<double>& eps,
                      const ChannelSet& ch, NoisePower noise, BfScheme bf) {
    std::vector<double> u0 = rates_all(profile_for_structure(cs0, ch, noise, bf), ch, noise);
    std::vector<double> u1 = rates_all(profile_for_structure(cs1, ch, noise, bf), ch, noise);
    bool some_strict = false;
    for (LinkId i : union_of(T)) {
        std::size_t k = static_cast<std::size_t>(i - 1);
        Message m = classify(u1[k], u0[k], eps[k]);
        if (m == Message::M3) return false;
        if (m == Message::M1) some_strict = true;
    }
    return some_strict;
}

std::vector<std::vector<int>> lex_r_combinations(int m, int r) {
    std::vector<std::vector<int>> out;
    if (r < 1 || r > m) return out;
    std::vector<int> c(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) c[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
        out.push_back(c);
        // advance to the lexicographic successor
        int i = r - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == m - r + i + 1) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < r; ++k)
            c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] + 1;
    }
    return out;
}

FormationResult run_formation(const ChannelSet& ch, NoisePower noise,
                              const OverheadModel& model, int q, BfScheme bf) {
    const int K = ch.num_links();
    if (K < 2) throw std::invalid_argument("run_formation: needs K >= 2");
    if (q < 2) throw std::invalid_argument("run_formation: needs q >= 2");

    std::vector<double> grand_rates = rates_all(
        profile_for_structure(CoalitionStructure::grand(K), ch, noise, bf), ch, noise);

    FormationResult res;
    CoalitionStructure cs = CoalitionStructure::singletons(K);
    StrategyProfile profile = profile_for_structure(cs, ch, noise, bf);
    std::vector<double> u = rates_all(profile, ch, noise);
    int step = 0;

    int r = std::min(q, cs.size());
    while (r >= 2 && cs.size() >= 2) {
        bool merged = false;
        for (const auto& combo : lex_r_combinations(cs.size(), r)) {
            ++res.n_iter;
            std::vector<Coalition> T;
            for (int idx : combo) T.push_back(cs.coalitions[static_cast<std::size_t>(idx - 1)]);
            std::vector<LinkId> members = union_of(T);
            res.theta += static_cast<long long>(members.size());

            Coalition merged_coal((std::vector<LinkId>(members)));
            std::vector<double> eps =
                resolve_overheads(model, merged_coal.size(), grand_rates);

            // only the merging links change their beamformers
            StrategyProfile tentative = profile;
            for (LinkId i : members)
                tentative[static_cast<std::size_t>(i - 1)] =
                    member_beamformer(i, merged_coal, ch, noise, bf);

            bool some_m1 = false, any_m3 = false;
            std::vector<MemberOutcome> outcomes;
            for (LinkId i : members) {
                std::size_t k = static_cast<std::size_t>(i - 1);
                MemberOutcome o;
                o.player = i;
                o.util_before = u[k];
                o.util_after = rate(i, tentative, ch, noise);
                o.eps = eps[k];
                o.message = classify(o.util_after, o.util_before, o.eps);
                some_m1 |= o.message == Message::M1;
                any_m3 |= o.message == Message::M3;
                outcomes.push_back(o);
            }

            if (!any_m3 && some_m1) {
                DeviationEvent ev;
                ev.step = ++step;
                ev.merged = T;
                ev.members = std::move(outcomes);
                for (LinkId i = 1; i <= K; ++i)
                    if (!merged_coal.contains(i)) ev.informed.push_back(i);
                cs = q_deviate(cs, T);
                ev.result = cs;
                ev.n_iter_at = res.n_iter;
                ev.theta_at = res.theta;
                res.trace.push_back(std::move(ev));

                profile = profile_for_structure(cs, ch, noise, bf);
                u = rates_all(profile, ch, noise);
                r = std::min(q, cs.size());
                merged = true;
                break;
            }
        }
        if (!merged) --r;
    }
    res.final_structure = cs;
    return res;
}

bool verify_stable(const CoalitionStructure& cs, int q, const OverheadModel& model,
                   const ChannelSet& ch, NoisePower noise, BfScheme bf) {
    const int L = cs.size();
    if (L > 16)
        throw std::invalid_argument("verify_stable: structure too large for exhaustive check");
    if (L < 2) return true;  // no merge possible
    std::vector<double> grand_rates = rates_all(
        profile_for_structure(CoalitionStructure::grand(ch.num_links()), ch, noise, bf), ch,
        noise);
    for (int r = 2; r <= std::min(q, L); ++r) {
        for (const auto& combo : lex_r_combinations(L, r)) {
            std::vector<Coalition> T;
            for (int idx : combo) T.push_back(cs.coalitions[static_cast<std::size_t>(idx - 1)]);
            int merged_size = static_cast<int>(union_of(T).size());
            std::vector<double> eps = resolve_overheads(model, merged_size, grand_rates);
            if (pareto_dominates(cs, q_deviate(cs, T), T, eps, ch, noise, bf)) return false;
        }
    }
    return true;
}

nlohmann::json FormationResult::to_json() const {
    nlohmann::json j;
    auto structure_json = [](const CoalitionStructure& cs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : cs.coalitions) arr.push_back(c.members);
        return arr;
    };
    j["final"] = structure_json(final_structure);
    j["theta"] = theta;
    j["n_iter"] = n_iter;
    nlohmann::json trace_json = nlohmann::json::array();
    for (const auto& ev : trace) {
        nlohmann::json e;
        e["step"] = ev.step;
        nlohmann::json merged_json = nlohmann::json::array();
        for (const auto& c : ev.merged) merged_json.push_back(c.members);
        e["merged"] = std::move(merged_json);
        e["result"] = structure_json(ev.result);
        nlohmann::json msgs = nlohmann::json::array();
        for (const auto& o : ev.members) {
            msgs.push_back({{"player", o.player},
                            {"message", to_string(o.message)},
                            {"util_before", o.util_before},
                            {"util_after", o.util_after},
                            {"eps", o.eps}});
        }
        for (LinkId i : ev.informed)
            msgs.push_back({{"player", i}, {"message", to_string(Message::M4)}});
        e["messages"] = std::move(msgs);
        e["n_iter_at"] = ev.n_iter_at;
        e["theta_at"] = ev.theta_at;
        trace_json.push_back(std::move(e));
    }
    j["trace"] = std::move(trace_json);
    return j;
}

}  // namespace coalsim
