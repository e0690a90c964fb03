#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "coalsim/scenario.hpp"

using namespace coalsim;

TEST_CASE("sample_channels is deterministic in (seed, realization)") {
    Scenario sc = Scenario::iid(3, 4);
    ChannelSet a = sample_channels(sc, 42, 7);
    ChannelSet b = sample_channels(sc, 42, 7);
    for (LinkId i = 1; i <= 3; ++i)
        for (LinkId j = 1; j <= 3; ++j)
            CHECK((a.channel(i, j) - b.channel(i, j)).norm() == 0.0);  // bit-identical

    ChannelSet c = sample_channels(sc, 42, 8);
    CHECK((a.channel(1, 1) - c.channel(1, 1)).norm() > 0.0);
    ChannelSet d = sample_channels(sc, 43, 7);
    CHECK((a.channel(1, 1) - d.channel(1, 1)).norm() > 0.0);
}

TEST_CASE("path-loss norm is exact with positions") {
    Scenario sc;
    sc.K = 2;
    sc.antennas = {4, 4};
    sc.pathloss_exponent = 3.0;
    sc.tx_positions = {{0.0, 0.0}, {500.0, 0.0}};
    sc.rx_positions = {{100.0, 0.0}, {600.0, 0.0}};
    sc.validate();
    ChannelSet ch = sample_channels(sc, 1, 0);
    for (LinkId i = 1; i <= 2; ++i)
        for (LinkId j = 1; j <= 2; ++j) {
            double d = sc.distance(i, j);
            CHECK(ch.channel(i, j).norm() ==
                  doctest::Approx(std::pow(d, -1.5)).epsilon(1e-14));
        }
    // delta = 3, d = 100 m -> ||h|| = 1e-3
    CHECK(ch.channel(1, 1).norm() == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("channel entries are CN(0,1) without positions") {
    Scenario sc = Scenario::iid(1, 2);
    const int n = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < n; ++r) {
        ChannelSet ch = sample_channels(sc, 3, static_cast<std::uint64_t>(r));
        double x = ch.channel(1, 1)[0].real();
        sum += x;
        sum_sq += x * x;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    double se = std::sqrt(0.5 / n);
    CHECK(std::abs(mean) < 3.0 * se);
    CHECK(var == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("snr_to_sigma2") {
    Scenario sc = Scenario::iid(2, 2);
    CHECK(snr_to_sigma2(sc, 1.0).sigma2 == 1.0);
    CHECK(snr_to_sigma2(sc, std::pow(10.0, 2.5)).sigma2 ==
          doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-14));

    Scenario pos;
    pos.K = 1;
    pos.antennas = {2};
    pos.pathloss_exponent = 3.0;
    pos.tx_positions = {{0.0, 0.0}};
    pos.rx_positions = {{100.0, 0.0}};
    pos.validate();
    CHECK(snr_to_sigma2(pos, 1.0).sigma2 == doctest::Approx(1e-6).epsilon(1e-14));

    CHECK_THROWS(snr_to_sigma2(sc, 0.0));
}

TEST_CASE("differing direct distances make the SNR ambiguous") {
    Scenario sc;
    sc.K = 2;
    sc.antennas = {2, 2};
    sc.tx_positions = {{0.0, 0.0}, {500.0, 0.0}};
    sc.rx_positions = {{100.0, 0.0}, {700.0, 0.0}};
    sc.validate();
    CHECK_THROWS(sc.direct_distance());
}

TEST_CASE("coinciding positions are rejected") {
    Scenario sc;
    sc.K = 2;
    sc.antennas = {2, 2};
    sc.tx_positions = {{0.0, 0.0}, {500.0, 0.0}};
    sc.rx_positions = {{100.0, 0.0}, {500.0, 0.0}};  // rx2 on top of tx2
    CHECK_THROWS(sc.validate());
    CHECK_THROWS(sample_channels(sc, 1, 0));
}

TEST_CASE("scenario loads from JSON") {
    nlohmann::json j = {
        {"K", 2},
        {"antennas", 4},
        {"pathloss_exponent", 2.5},
        {"tx_positions", {{0.0, 0.0}, {500.0, 0.0}}},
        {"rx_positions", {{100.0, 0.0}, {600.0, 0.0}}},
    };
    Scenario sc = Scenario::from_json(j);
    CHECK(sc.K == 2);
    CHECK(sc.antennas == std::vector<int>{4, 4});
    CHECK(sc.pathloss_exponent == 2.5);
    CHECK(sc.direct_distance() == doctest::Approx(100.0));

    Scenario topo = Scenario::from_file(std::string(COALSIM_DATA_DIR) + "/topology8.json");
    CHECK(topo.K == 8);
    CHECK(topo.direct_distance() == doctest::Approx(100.0));
}
