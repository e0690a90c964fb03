#include "coalsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace coalsim {

namespace {

// splitmix64 finalizer; used to derive one PRNG substream per
// (seed, realization) pair so realizations are order-free.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// xoshiro-free, fully specified Gaussian source: mt19937_64 uniforms
// fed through Box-Muller. std::normal_distribution is avoided because
// its output sequence is implementation-defined.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t stream) : rng_(stream) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // uniforms in (0,1]: avoids log(0)
        double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace

ChannelSet::ChannelSet(int num_links, std::vector<int> antennas)
    : K_(num_links), antennas_(std::move(antennas)) {
    if (K_ < 1 || static_cast<int>(antennas_.size()) != K_)
        throw std::invalid_argument("ChannelSet: antenna list must have K entries, K >= 1");
    h_.resize(static_cast<std::size_t>(K_) * K_);
    for (int i = 1; i <= K_; ++i)
        for (int j = 1; j <= K_; ++j)
            channel(i, j) = Eigen::VectorXcd::Zero(antennas_[static_cast<std::size_t>(i - 1)]);
}

const Eigen::VectorXcd& ChannelSet::channel(LinkId tx, LinkId rx) const {
    return h_[static_cast<std::size_t>(tx - 1) * K_ + static_cast<std::size_t>(rx - 1)];
}

Eigen::VectorXcd& ChannelSet::channel(LinkId tx, LinkId rx) {
    return h_[static_cast<std::size_t>(tx - 1) * K_ + static_cast<std::size_t>(rx - 1)];
}

double Scenario::distance(LinkId tx, LinkId rx) const {
    const auto& t = tx_positions[static_cast<std::size_t>(tx - 1)];
    const auto& r = rx_positions[static_cast<std::size_t>(rx - 1)];
    return std::hypot(t[0] - r[0], t[1] - r[1]);
}

double Scenario::direct_distance() const {
    if (!has_positions()) return 1.0;
    double d = distance(1, 1);
    for (LinkId i = 2; i <= K; ++i) {
        double di = distance(i, i);
        if (std::abs(di - d) > 1e-9 * std::max(1.0, d))
            throw std::invalid_argument(
                "scenario: links have differing direct distances, SNR is ambiguous");
    }
    return d;
}

void Scenario::validate() const {
    if (K < 1) throw std::invalid_argument("scenario: K must be >= 1");
    if (static_cast<int>(antennas.size()) != K)
        throw std::invalid_argument("scenario: antenna list must have K entries");
    for (int n : antennas)
        if (n < 2) throw std::invalid_argument("scenario: every N_i must be >= 2");
    if (pathloss_exponent <= 0.0)
        throw std::invalid_argument("scenario: path loss exponent must be positive");
    if (tx_positions.empty() != rx_positions.empty())
        throw std::invalid_argument("scenario: tx and rx positions must both be given or omitted");
    if (has_positions()) {
        if (static_cast<int>(tx_positions.size()) != K ||
            static_cast<int>(rx_positions.size()) != K)
            throw std::invalid_argument("scenario: position lists must have K entries");
        for (LinkId i = 1; i <= K; ++i)
            for (LinkId j = 1; j <= K; ++j)
                if (distance(i, j) <= 0.0)
                    throw std::invalid_argument(
                        "scenario: transmitter and receiver positions coincide");
    }
}

Scenario Scenario::iid(int num_links, int num_antennas) {
    Scenario sc;
    sc.K = num_links;
    sc.antennas.assign(static_cast<std::size_t>(num_links), num_antennas);
    sc.validate();
    return sc;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
    Scenario sc;
    sc.K = j.at("K").get<int>();
    const auto& ants = j.at("antennas");
    if (ants.is_number())
        sc.antennas.assign(static_cast<std::size_t>(sc.K), ants.get<int>());
    else
        sc.antennas = ants.get<std::vector<int>>();
    if (j.contains("pathloss_exponent")) sc.pathloss_exponent = j["pathloss_exponent"].get<double>();
    if (j.contains("tx_positions")) {
        sc.tx_positions = j["tx_positions"].get<std::vector<std::array<double, 2>>>();
        sc.rx_positions = j.at("rx_positions").get<std::vector<std::array<double, 2>>>();
    }
    sc.validate();
    return sc;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

NoisePower snr_to_sigma2(const Scenario& sc, double snr) {
    if (snr <= 0.0) throw std::invalid_argument("snr must be positive");
    double d = sc.direct_distance();
    return NoisePower{std::pow(d, -sc.pathloss_exponent) / snr};
}

ChannelSet sample_channels(const Scenario& sc, std::uint64_t seed, std::uint64_t realization) {
    sc.validate();
    ChannelSet ch(sc.K, sc.antennas);
    GaussianSource g(splitmix64(splitmix64(seed) + realization));
    const double comp_sd = std::sqrt(0.5);  // CN(0,1): each part has variance 1/2
    for (LinkId i = 1; i <= sc.K; ++i) {
        for (LinkId j = 1; j <= sc.K; ++j) {
            Eigen::VectorXcd& h = ch.channel(i, j);
            for (Eigen::Index n = 0; n < h.size(); ++n)
                h[n] = std::complex<double>(comp_sd * g.next(), comp_sd * g.next());
            if (sc.has_positions()) {
                double d = sc.distance(i, j);
                h *= std::pow(d, -sc.pathloss_exponent / 2.0) / h.norm();
            }
        }
    }
    return ch;
}

}  // namespace coalsim
