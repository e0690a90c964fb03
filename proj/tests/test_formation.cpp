#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <nlohmann/json.hpp>

#include "coalsim/combinatorics.hpp"
#include "coalsim/core_analysis.hpp"
#include "coalsim/formation.hpp"

using namespace coalsim;
using cd = std::complex<double>;

namespace {

ChannelSet random_channels(int K, int N, std::uint64_t realization) {
    return sample_channels(Scenario::iid(K, N), 4321, realization);
}

// diagonal channels: no interference, so no incentive to ever merge
ChannelSet orthogonal_pair() {
    ChannelSet ch(2, {2, 2});
    ch.channel(1, 1) << cd(1, 0), cd(0, 0);
    ch.channel(1, 2) << cd(0, 0), cd(1, 0);
    ch.channel(2, 1) << cd(0, 0), cd(1, 0);
    ch.channel(2, 2) << cd(1, 0), cd(0, 0);
    return ch;
}

}  // namespace

TEST_CASE("lex_r_combinations enumerates in lexicographic order") {
    auto c32 = lex_r_combinations(3, 2);
    REQUIRE(c32.size() == 3);
    CHECK(c32[0] == std::vector<int>{1, 2});
    CHECK(c32[1] == std::vector<int>{1, 3});
    CHECK(c32[2] == std::vector<int>{2, 3});

    auto c83 = lex_r_combinations(8, 3);
    CHECK(c83.size() == 56);
    CHECK(c83.front() == std::vector<int>{1, 2, 3});
    CHECK(c83.back() == std::vector<int>{6, 7, 8});
    for (std::size_t k = 1; k < c83.size(); ++k) CHECK(c83[k - 1] < c83[k]);

    CHECK(lex_r_combinations(2, 3).empty());
    CHECK(lex_r_combinations(4, 4).size() == 1);
}

TEST_CASE("q_deviate merges the selected coalitions") {
    CoalitionStructure cs = CoalitionStructure::singletons(4);
    CoalitionStructure merged = q_deviate(cs, {Coalition({1}), Coalition({3})});
    REQUIRE(merged.coalitions.size() == 3);
    CHECK(merged.coalitions[0].members == std::vector<LinkId>{1, 3});
    CHECK(merged.coalitions[1].members == std::vector<LinkId>{2});
    CHECK(merged.is_partition_of(4));

    CoalitionStructure again = q_deviate(merged, {Coalition({1, 3}), Coalition({4})});
    CHECK(again.coalitions[0].members == std::vector<LinkId>{1, 3, 4});

    CHECK_THROWS(q_deviate(cs, {Coalition({1})}));               // fewer than two
    CHECK_THROWS(q_deviate(cs, {Coalition({1}), Coalition({5})}));  // not in cs
}

TEST_CASE("resolve_overheads by model") {
    std::vector<double> grand = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};

    std::vector<double> z = resolve_overheads(OverheadModel::zero(), 3, grand);
    for (double e : z) CHECK(e == 0.0);

    std::vector<double> u = resolve_overheads(OverheadModel::uniform(), 3, grand);
    for (int i = 0; i < 8; ++i) CHECK(u[i] == doctest::Approx(grand[i] / 8.0));

    std::vector<double> s = resolve_overheads(OverheadModel::size_proportional(), 2, grand);
    for (int i = 0; i < 8; ++i) CHECK(s[i] == doctest::Approx(2.0 / 8.0 * grand[i]));
    std::vector<double> s8 = resolve_overheads(OverheadModel::size_proportional(), 8, grand);
    for (int i = 0; i < 8; ++i) CHECK(s8[i] == doctest::Approx(grand[i]));

    std::vector<double> fixed = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<double> e =
        resolve_overheads(OverheadModel::explicit_eps_vector(fixed), 5, grand);
    CHECK(e == fixed);
    CHECK_THROWS(resolve_overheads(OverheadModel::explicit_eps_vector({0.1}), 2, grand));
    CHECK_THROWS(
        resolve_overheads(OverheadModel::explicit_eps_vector({-0.1, 0.0}), 2,
                          std::vector<double>{1.0, 1.0}));
}

TEST_CASE("pareto_dominates semantics") {
    ChannelSet ch = random_channels(2, 4, 0);
    NoisePower noise{1e-4};  // high SNR: ZF pair beats MRT war
    CoalitionStructure ne = CoalitionStructure::singletons(2);
    CoalitionStructure grand = CoalitionStructure::grand(2);
    std::vector<Coalition> T = {Coalition({1}), Coalition({2})};
    std::vector<double> zero(2, 0.0);

    CHECK(pareto_dominates(ne, grand, T, zero, ch, noise, BfScheme::ZF));

    // losing up to eps is tolerated as long as someone else gains
    std::vector<double> u_ne = rates_all(
        profile_for_structure(ne, ch, noise, BfScheme::ZF), ch, noise);
    std::vector<double> u_g = rates_all(
        profile_for_structure(grand, ch, noise, BfScheme::ZF), ch, noise);
    REQUIRE(u_g[0] > u_ne[0]);
    std::vector<double> edge = {0.0, u_ne[1] - u_g[1] + 1.0};  // player 2 may lose 1 bit
    if (u_g[1] < u_ne[1] + 1.0)
        CHECK(pareto_dominates(ne, grand, T, edge, ch, noise, BfScheme::ZF));

    // at low SNR ZF cooperation only sacrifices signal power...
    NoisePower low_snr{1e6};
    CHECK(!pareto_dominates(ne, grand, T, zero, ch, low_snr, BfScheme::ZF));
    // ...unless the deviation tolerance absorbs any loss
    std::vector<double> huge(2, 100.0);
    CHECK(pareto_dominates(ne, grand, T, huge, ch, low_snr, BfScheme::ZF));
}

TEST_CASE("formation on orthogonal channels stops immediately") {
    ChannelSet ch = orthogonal_pair();
    FormationResult r = run_formation(ch, NoisePower{1.0}, OverheadModel::zero(), 2,
                                      BfScheme::ZF);
    CHECK(r.final_structure.coalitions.size() == 2);
    CHECK(r.trace.empty());
    CHECK(r.n_iter == 1);  // the single pair candidate {1},{2}
    CHECK(r.theta == 2);   // both members compared once
}

TEST_CASE("high SNR forms the grand coalition in one scan") {
    for (std::uint64_t r = 0; r < 10; ++r) {
        ChannelSet ch = random_channels(4, 4, r);
        FormationResult res = run_formation(ch, NoisePower{1e-6}, OverheadModel::zero(), 4,
                                            BfScheme::ZF);
        CHECK(res.final_structure.coalitions.size() == 1);
        REQUIRE(!res.trace.empty());
        CHECK(res.trace.front().merged.size() == 4);
        CHECK(res.n_iter == 1);  // the r=4 candidate is the first examined
    }
}

TEST_CASE("beyond the singleton threshold nobody merges") {
    for (std::uint64_t r = 0; r < 10; ++r) {
        ChannelSet ch = random_channels(3, 3, 100 + r);
        double thr = singleton_threshold(ch);
        REQUIRE(thr > 0.0);
        FormationResult res = run_formation(ch, NoisePower{2.0 * thr},
                                            OverheadModel::zero(), 3, BfScheme::ZF);
        CHECK(res.final_structure.coalitions.size() == 3);
        CHECK(res.trace.empty());
    }
}

TEST_CASE("formation invariants over random instances") {
    int checked_stable = 0;
    for (std::uint64_t r = 0; r < 30; ++r) {
        int K = 3 + static_cast<int>(r % 3);
        int q = 2 + static_cast<int>(r % static_cast<std::uint64_t>(K - 1));
        double s2 = (r % 2 == 0) ? 1e-2 : 0.5;
        BfScheme bf = (r % 2 == 0) ? BfScheme::ZF : BfScheme::WF;
        ChannelSet ch = random_channels(K, K, 200 + r);
        OverheadModel model =
            (r % 3 == 0) ? OverheadModel::uniform()
                         : (r % 3 == 1 ? OverheadModel::size_proportional()
                                       : OverheadModel::zero());
        FormationResult res = run_formation(ch, NoisePower{s2}, model, q, bf);

        CHECK(res.final_structure.is_partition_of(K));
        CHECK(res.n_iter <= static_cast<long long>(worst_case_iters(K, q)));
        CHECK(res.theta >= res.n_iter);  // every candidate costs >= 1 comparison

        // the trace strictly coarsens the structure
        std::size_t prev = static_cast<std::size_t>(K);
        long long prev_iter = 0;
        for (const auto& ev : res.trace) {
            CHECK(ev.result.coalitions.size() < prev);
            CHECK(ev.result.is_partition_of(K));
            CHECK(ev.merged.size() >= 2);
            CHECK(ev.merged.size() <= static_cast<std::size_t>(q));
            CHECK(ev.n_iter_at > prev_iter);
            prev = ev.result.coalitions.size();
            prev_iter = ev.n_iter_at;
        }
        if (!res.trace.empty())
            CHECK(res.trace.back().result.coalitions ==
                  res.final_structure.coalitions);

        // replay determinism
        FormationResult res2 = run_formation(ch, NoisePower{s2}, model, q, bf);
        CHECK(res2.theta == res.theta);
        CHECK(res2.n_iter == res.n_iter);
        CHECK(res2.final_structure.coalitions == res.final_structure.coalitions);

        // the output is q-stable per the exhaustive oracle
        CHECK(verify_stable(res.final_structure, q, model, ch, NoisePower{s2}, bf));
        ++checked_stable;
    }
    CHECK(checked_stable == 30);
}

TEST_CASE("verify_stable flags unstable structures") {
    ChannelSet ch = random_channels(3, 4, 999);
    NoisePower noise{1e-6};  // high SNR: singletons are not stable
    CHECK(!verify_stable(CoalitionStructure::singletons(3), 3, OverheadModel::zero(), ch,
                         noise, BfScheme::ZF));
    CHECK(verify_stable(CoalitionStructure::grand(3), 3, OverheadModel::zero(), ch, noise,
                        BfScheme::ZF));
}

TEST_CASE("formation result serializes to JSON") {
    ChannelSet ch = random_channels(3, 3, 50);
    FormationResult res =
        run_formation(ch, NoisePower{1e-4}, OverheadModel::uniform(), 3, BfScheme::ZF);
    nlohmann::json j = res.to_json();
    CHECK(j["n_iter"].get<long long>() == res.n_iter);
    CHECK(j["theta"].get<long long>() == res.theta);
    CHECK(j["final"].size() == res.final_structure.coalitions.size());
    CHECK(j["trace"].size() == res.trace.size());
    for (std::size_t k = 0; k < res.trace.size(); ++k) {
        // messages list the merging members' outcomes plus one
        // coalition-formed broadcast per informed outsider
        CHECK(j["trace"][k]["messages"].size() ==
              res.trace[k].members.size() + res.trace[k].informed.size());
        CHECK(j["trace"][k]["merged"].size() == res.trace[k].merged.size());
    }
}

TEST_CASE("run_formation validates its inputs") {
    ChannelSet ch = random_channels(2, 2, 0);
    CHECK_THROWS(run_formation(ch, NoisePower{1.0}, OverheadModel::zero(), 1,
                               BfScheme::ZF));
    CHECK_THROWS(run_formation(ch, NoisePower{0.0}, OverheadModel::zero(), 2,
                               BfScheme::ZF));
    CHECK_THROWS(run_formation(ch, NoisePower{1.0},
                               OverheadModel::explicit_eps_vector({0.1}), 2,
                               BfScheme::ZF));
}
