// coalsim: batch experiment driver for coalitional beamforming games in
// the K-user MISO interference channel. Subcommands emit CSV/JSON for
// external plotting.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coalsim/combinatorics.hpp"
#include "coalsim/sweep.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coalitional beamforming game simulator for the MISO interference channel"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    std::optional<std::uint64_t> seed_override;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_path, "JSON configuration file");
        if (config_required) opt->required();
        cmd->add_option("--seed", seed_override, "override the config seed");
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        cmd->add_option("--format", format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* thresholds = app.add_subcommand(
        "thresholds", "epsilon-core emptiness thresholds for a fixed channel realization");
    add_common(thresholds, true);

    auto* formation =
        app.add_subcommand("formation", "single coalition formation run with full trace");
    add_common(formation, true);

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo SNR sweep of coalition formation");
    add_common(sweep, true);

    auto* complexity =
        app.add_subcommand("complexity", "merge/split/iteration-bound count table");
    add_common(complexity, false);
    unsigned k_min = 2, k_max = 16;
    std::vector<unsigned> q_list = {2, 3, 4, 8};
    complexity->add_option("--kmin", k_min, "smallest K");
    complexity->add_option("--kmax", k_max, "largest K");
    complexity->add_option("--q", q_list, "q values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (thresholds->parsed()) {
            auto cfg = coalsim::ThresholdsConfig::from_json(load_config(config_path));
            if (seed_override) cfg.seed = *seed_override;
            auto res = coalsim::run_thresholds(cfg);
            write_output(out_path, format == "json" ? coalsim::thresholds_json(res).dump(2) + "\n"
                                                    : coalsim::thresholds_csv(res));
        } else if (formation->parsed()) {
            auto cfg = coalsim::FormationConfig::from_json(load_config(config_path));
            if (seed_override) cfg.seed = *seed_override;
            auto res = coalsim::run_formation_experiment(cfg);
            write_output(out_path, res.to_json().dump(2) + "\n");
        } else if (sweep->parsed()) {
            auto cfg = coalsim::SweepConfig::from_json(load_config(config_path));
            if (seed_override) cfg.seed = *seed_override;
            auto rows = coalsim::run_sweep(cfg, jobs);
            write_output(out_path, coalsim::sweep_csv(rows));
        } else if (complexity->parsed()) {
            std::vector<unsigned> Ks;
            for (unsigned K = k_min; K <= k_max; ++K) Ks.push_back(K);
            auto rows = coalsim::count_table(Ks, q_list);
            write_output(out_path, coalsim::count_table_csv(rows));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
