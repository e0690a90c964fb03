#ifndef COALSIM_SWEEP_HPP
#define COALSIM_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "coalsim/core_analysis.hpp"
#include "coalsim/formation.hpp"
#include "coalsim/scenario.hpp"

namespace coalsim {

/// Scenario reference: either a topology file or an i.i.d. generator.
struct ScenarioSpec {
    std::optional<std::string> file;
    int K = 8;
    int antennas = 8;

    Scenario resolve() const;
    static ScenarioSpec from_json(const nlohmann::json& j);
};

struct SweepConfig {
    ScenarioSpec scenario;
    std::vector<double> snr_db;
    int realizations = 100;
    std::uint64_t seed = 1;
    std::vector<BfScheme> schemes = {BfScheme::ZF, BfScheme::WF};
    std::vector<int> q_values = {8};
    std::vector<OverheadModel> overheads = {OverheadModel::zero()};

    static SweepConfig from_json(const nlohmann::json& j);
};

struct SweepRow {
    double snr_db = 0.0;
    BfScheme scheme = BfScheme::ZF;
    int q = 2;
    OverheadModel::Kind overhead = OverheadModel::Kind::Zero;
    double avg_user_rate = 0.0;
    double avg_user_rate_ne = 0.0;     // joint-MRT baseline on same channels
    double avg_num_coalitions = 0.0;
    double avg_theta = 0.0;
    int realizations = 0;
};

/// Runs one formation experiment per (row, realization) on a worker
/// pool; results land in pre-indexed slots so serial and parallel runs
/// produce identical averages (compensated summation in slot order).
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int jobs = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct ThresholdsConfig {
    ScenarioSpec scenario;
    std::uint64_t seed = 1;
    std::uint64_t realization = 0;
    std::vector<double> eps_grid;  // uniform overhead values

    static ThresholdsConfig from_json(const nlohmann::json& j);
};

struct ThresholdRow {
    double eps = 0.0;
    CoreFlavor flavor = CoreFlavor::Weak;
    double sigma_lower = 0.0;
    double sigma_upper = 0.0;
    bool nonempty_all = false;
};

struct ThresholdsResult {
    std::vector<ThresholdRow> rows;
    double sigma_hat = 0.0;    // zero-overhead core threshold
    double sigma_check = 0.0;  // singleton-coalition threshold
};

ThresholdsResult run_thresholds(const ThresholdsConfig& cfg);
std::string thresholds_csv(const ThresholdsResult& res);
nlohmann::json thresholds_json(const ThresholdsResult& res);

struct FormationConfig {
    ScenarioSpec scenario;
    std::uint64_t seed = 1;
    std::uint64_t realization = 0;
    double snr_db = 25.0;
    BfScheme scheme = BfScheme::ZF;
    int q = 8;
    OverheadModel overhead = OverheadModel::zero();

    static FormationConfig from_json(const nlohmann::json& j);
};

FormationResult run_formation_experiment(const FormationConfig& cfg);

OverheadModel overhead_from_json(const nlohmann::json& j);

}  // namespace coalsim

#endif  // COALSIM_SWEEP_HPP
