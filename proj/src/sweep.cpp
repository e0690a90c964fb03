#include "coalsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "coalsim/format.hpp"

namespace coalsim {

namespace {

// Kahan accumulator; summation order is fixed to the slot order so
// serial and parallel sweeps produce identical averages.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct CellResult {
    double user_rate = 0.0;     // mean over the K users
    double user_rate_ne = 0.0;  // joint-MRT baseline
    double num_coalitions = 0.0;
    double theta = 0.0;
};

double mean(const std::vector<double>& v) {
    Kahan k;
    for (double x : v) k.add(x);
    return k.sum / static_cast<double>(v.size());
}

}  // namespace

Scenario ScenarioSpec::resolve() const {
    if (file) return Scenario::from_file(*file);
    return Scenario::iid(K, antennas);
}

ScenarioSpec ScenarioSpec::from_json(const nlohmann::json& j) {
    ScenarioSpec s;
    if (j.contains("file")) {
        s.file = j["file"].get<std::string>();
    } else {
        s.K = j.at("K").get<int>();
        s.antennas = j.at("antennas").get<int>();
    }
    return s;
}

OverheadModel overhead_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        auto kind = overhead_kind_from_string(j.get<std::string>());
        if (kind == OverheadModel::Kind::Explicit)
            throw std::invalid_argument("explicit overhead needs an \"epsilon\" array");
        return OverheadModel{kind, {}};
    }
    auto kind = overhead_kind_from_string(j.at("kind").get<std::string>());
    if (kind == OverheadModel::Kind::Explicit)
        return OverheadModel::explicit_eps_vector(j.at("epsilon").get<std::vector<double>>());
    return OverheadModel{kind, {}};
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    SweepConfig c;
    c.scenario = ScenarioSpec::from_json(j.at("scenario"));
    c.snr_db = j.at("snr_db").get<std::vector<double>>();
    if (c.snr_db.empty()) throw std::invalid_argument("sweep: snr_db grid must be nonempty");
    c.realizations = j.value("realizations", 100);
    if (c.realizations < 1) throw std::invalid_argument("sweep: realizations must be >= 1");
    c.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("schemes")) {
        c.schemes.clear();
        for (const auto& s : j["schemes"]) c.schemes.push_back(bf_from_string(s.get<std::string>()));
    }
    if (j.contains("q")) c.q_values = j["q"].get<std::vector<int>>();
    for (int q : c.q_values)
        if (q < 2) throw std::invalid_argument("sweep: q values must be >= 2");
    if (j.contains("overheads")) {
        c.overheads.clear();
        for (const auto& o : j["overheads"]) c.overheads.push_back(overhead_from_json(o));
    }
    if (c.schemes.empty() || c.q_values.empty() || c.overheads.empty())
        throw std::invalid_argument("sweep: schemes, q and overheads must be nonempty");
    return c;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int jobs) {
    Scenario sc = cfg.scenario.resolve();
    if (sc.K > 16)
        throw std::invalid_argument("sweep: K exceeds the formation/verification guard");
    if (jobs < 1) jobs = 1;

    struct RowKey {
        double snr_db;
        BfScheme scheme;
        int q;
        OverheadModel model;
    };
    std::vector<RowKey> keys;
    for (double snr : cfg.snr_db)
        for (const auto& model : cfg.overheads)
            for (BfScheme bf : cfg.schemes)
                for (int q : cfg.q_values) keys.push_back({snr, bf, q, model});

    const std::size_t R = static_cast<std::size_t>(cfg.realizations);
    std::vector<CellResult> slots(keys.size() * R);

    auto eval_cell = [&](std::size_t task) {
        const RowKey& key = keys[task / R];
        std::uint64_t realization = task % R;
        ChannelSet ch = sample_channels(sc, cfg.seed, realization);
        NoisePower noise = snr_to_sigma2(sc, db_to_linear(key.snr_db));
        FormationResult fr = run_formation(ch, noise, key.model, key.q, key.scheme);
        CellResult cell;
        cell.user_rate = mean(
            rates_all(profile_for_structure(fr.final_structure, ch, noise, key.scheme), ch, noise));
        cell.user_rate_ne = mean(rates_all(
            profile_for_structure(CoalitionStructure::singletons(sc.K), ch, noise, key.scheme), ch,
            noise));
        cell.num_coalitions = fr.final_structure.size();
        cell.theta = static_cast<double>(fr.theta);
        slots[task] = cell;
    };

    const std::size_t total = slots.size();
    if (jobs == 1) {
        for (std::size_t t = 0; t < total; ++t) eval_cell(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t t = next.fetch_add(1);
                    if (t >= total) return;
                    eval_cell(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        Kahan rate_sum, ne_sum, coal_sum, theta_sum;
        for (std::size_t rix = 0; rix < R; ++rix) {
            const CellResult& c = slots[k * R + rix];
            rate_sum.add(c.user_rate);
            ne_sum.add(c.user_rate_ne);
            coal_sum.add(c.num_coalitions);
            theta_sum.add(c.theta);
        }
        SweepRow row;
        row.snr_db = keys[k].snr_db;
        row.scheme = keys[k].scheme;
        row.q = keys[k].q;
        row.overhead = keys[k].model.kind;
        double n = static_cast<double>(R);
        row.avg_user_rate = rate_sum.sum / n;
        row.avg_user_rate_ne = ne_sum.sum / n;
        row.avg_num_coalitions = coal_sum.sum / n;
        row.avg_theta = theta_sum.sum / n;
        row.realizations = cfg.realizations;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "snr_db,scheme,q,overhead,avg_user_rate,avg_user_rate_ne,"
           "avg_num_coalitions,avg_theta,realizations\n";
    for (const auto& r : rows) {
        out << format_double(r.snr_db) << ',' << to_string(r.scheme) << ',' << r.q << ','
            << to_string(r.overhead) << ',' << format_double(r.avg_user_rate) << ','
            << format_double(r.avg_user_rate_ne) << ',' << format_double(r.avg_num_coalitions)
            << ',' << format_double(r.avg_theta) << ',' << r.realizations << '\n';
    }
    return out.str();
}

ThresholdsConfig ThresholdsConfig::from_json(const nlohmann::json& j) {
    ThresholdsConfig c;
    c.scenario = ScenarioSpec::from_json(j.at("scenario"));
    c.seed = j.value("seed", std::uint64_t{1});
    c.realization = j.value("realization", std::uint64_t{0});
    c.eps_grid = j.at("eps_grid").get<std::vector<double>>();
    if (c.eps_grid.empty()) throw std::invalid_argument("thresholds: eps_grid must be nonempty");
    return c;
}

ThresholdsResult run_thresholds(const ThresholdsConfig& cfg) {
    Scenario sc = cfg.scenario.resolve();
    ChannelSet ch = sample_channels(sc, cfg.seed, cfg.realization);
    ThresholdsResult res;
    {
        std::vector<double> zero(static_cast<std::size_t>(sc.K), 0.0);
        res.sigma_hat = weak_core_report(ch, zero).sigma_bar;
        res.sigma_check = singleton_threshold(ch);
    }
    for (double eps : cfg.eps_grid) {
        std::vector<double> ev(static_cast<std::size_t>(sc.K), eps);
        for (CoreFlavor flavor : {CoreFlavor::Weak, CoreFlavor::Strong}) {
            CoreReport rep = flavor == CoreFlavor::Weak ? weak_core_report(ch, ev)
                                                        : strong_core_report(ch, ev);
            ThresholdRow row;
            row.eps = eps;
            row.flavor = flavor;
            row.sigma_lower = rep.sigma_underbar;
            row.sigma_upper = rep.sigma_bar;
            row.nonempty_all = rep.nonempty_for_all_sigma();
            res.rows.push_back(row);
        }
    }
    return res;
}

std::string thresholds_csv(const ThresholdsResult& res) {
    std::ostringstream out;
    out << "eps,flavor,sigma_lower,sigma_upper,nonempty_all,sigma_hat,sigma_check\n";
    for (const auto& r : res.rows) {
        out << format_double(r.eps) << ',' << (r.flavor == CoreFlavor::Weak ? "weak" : "strong")
            << ',' << format_double(r.sigma_lower) << ',' << format_double(r.sigma_upper) << ','
            << (r.nonempty_all ? 1 : 0) << ',' << format_double(res.sigma_hat) << ','
            << format_double(res.sigma_check) << '\n';
    }
    return out.str();
}

nlohmann::json thresholds_json(const ThresholdsResult& res) {
    nlohmann::json j;
    j["sigma_hat"] = res.sigma_hat;
    j["sigma_check"] = res.sigma_check;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : res.rows) {
        rows.push_back({{"eps", r.eps},
                        {"flavor", r.flavor == CoreFlavor::Weak ? "weak" : "strong"},
                        {"sigma_lower", r.sigma_lower},
                        {"sigma_upper", std::isinf(r.sigma_upper)
                                            ? nlohmann::json("inf")
                                            : nlohmann::json(r.sigma_upper)},
                        {"nonempty_all", r.nonempty_all}});
    }
    j["rows"] = std::move(rows);
    return j;
}

FormationConfig FormationConfig::from_json(const nlohmann::json& j) {
    FormationConfig c;
    c.scenario = ScenarioSpec::from_json(j.at("scenario"));
    c.seed = j.value("seed", std::uint64_t{1});
    c.realization = j.value("realization", std::uint64_t{0});
    c.snr_db = j.value("snr_db", 25.0);
    if (j.contains("scheme")) c.scheme = bf_from_string(j["scheme"].get<std::string>());
    c.q = j.value("q", 8);
    if (j.contains("overhead")) c.overhead = overhead_from_json(j["overhead"]);
    return c;
}

FormationResult run_formation_experiment(const FormationConfig& cfg) {
    Scenario sc = cfg.scenario.resolve();
    ChannelSet ch = sample_channels(sc, cfg.seed, cfg.realization);
    NoisePower noise = snr_to_sigma2(sc, db_to_linear(cfg.snr_db));
    return run_formation(ch, noise, cfg.overhead, cfg.q, cfg.scheme);
}

}  // namespace coalsim
