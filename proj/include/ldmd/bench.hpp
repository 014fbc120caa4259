#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldmd/dmd.hpp"
#include "ldmd/error_analysis.hpp"
#include "ldmd/presets.hpp"

namespace ldmd {

enum class Method { EulerianDmd, EulerianPod, LagrangianDmd, LagrangianPod, LevelSetDmd };

std::string to_string(Method m);
Method method_from_string(const std::string& name);
std::vector<Method> parse_methods(const std::string& comma_list);
std::vector<Method> default_methods(Preset p);
inline bool is_dmd(Method m) { return m != Method::EulerianPod && m != Method::LagrangianPod; }

/// Everything a run needs. Unset optionals fall back to the preset.
struct ExperimentConfig {
    Preset preset = Preset::Test1;
    int scale = 1;
    std::optional<int> n_cells;
    std::optional<int> n_steps;
    std::optional<int> n_snapshots;
    std::optional<double> epsilon;
    std::optional<int> fixed_rank;
    std::vector<Method> methods;  // empty: preset default
    std::string output_dir;       // empty: nothing is written
    int levelset_ny = 0;          // 0: N_x / 10
    int output_stride = 0;        // 0: about 100 stored rows per CSV

    // custom problems
    double domain_lo = 0.0;
    double domain_hi = 2.0;
    double t_final = 1.0;
    std::string bc = "dirichlet-zero";  // or periodic
    std::string flux = "linear";        // or burgers
    double speed = 1.0;
    double diffusion = 0.0;
    std::string initial = "pulse";  // or sine

    ProblemSpec problem() const;
    int training_count() const;
    /// Fixed ranks to fit, or {0} for the energy criterion.
    std::vector<int> ranks() const;
    double energy_epsilon() const;
    std::vector<Method> effective_methods() const;
    int stride() const;
    /// Throws InvalidProblem unless 2 <= m < M and the sizes are positive.
    void validate() const;
};

/// Flat `key = value` text, '#' comments. Unknown keys throw
/// std::invalid_argument.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct MethodResult {
    Method method = Method::LagrangianDmd;
    std::string label;
    int requested_rank = 0;  // 0: energy criterion
    int rank = 0;
    bool ok = false;
    std::string error;
    double fit_seconds = 0.0;
    double rollout_seconds = 0.0;
    double total_seconds() const { return fit_seconds + rollout_seconds; }

    ErrorReport report;           // n = 1 .. M
    Matrix states;                // predictions on the Eulerian grid, n = 1 .. M
    Matrix observables;           // predicted observables, n = 1 .. M
    Matrix leading_modes;         // real parts of up to three leading modes (value block)
    std::vector<int> iterations;  // Newton iterations per step (POD)
    std::optional<DmdModel> model;
};

struct RunRecord {
    ExperimentConfig config;
    ProblemSpec spec;
    int m = 0;
    double eulerian_hfm_seconds = 0.0;
    std::optional<double> lagrangian_hfm_seconds;
    Matrix reference;               // Eulerian HFM u^0 .. u^M
    Matrix lagrangian_positions;    // x^0 .. x^M when a Lagrangian HFM ran
    Matrix lagrangian_values;       // u^0 .. u^M
    std::vector<MethodResult> methods;

    const MethodResult* find(Method m, int requested_rank = -1) const;
};

/// Runs the HFMs and the requested ROMs. ROM failures are captured per
/// method; HFM failures propagate. Writes the output directory when one is
/// configured.
RunRecord run_experiment(const ExperimentConfig& config);

/// snapshots.csv, lagrangian_*.csv, <label>_states.csv, errors*.csv,
/// modes.csv, timing.json, manifest.json and plot.py.
void write_outputs(const RunRecord& record, const std::string& dir);

nlohmann::json timing_json(const RunRecord& record);

/// One column per run directory (read from timing.json).
struct TimingColumn {
    std::string name;
    std::optional<int> rank;
    std::optional<double> dmd_seconds;
    std::optional<double> pod_seconds;
    std::optional<double> eulerian_hfm_seconds;
    std::optional<double> lagrangian_hfm_seconds;
};

TimingColumn timing_column(const nlohmann::json& timing);
/// Rows: rank, DMD, POD, Eulerian HFM, Lagrangian HFM; rows with no entry
/// in any column are omitted.
std::string format_timing_table(const std::vector<TimingColumn>& columns);
nlohmann::json timing_table_json(const std::vector<TimingColumn>& columns);

/// Re-checks invariants of an emitted directory. Returns one message per
/// violation; empty means valid.
std::vector<std::string> validate_output(const std::string& dir);

}  // namespace ldmd
