#include "ldmd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <functional>

#include "ldmd/csv.hpp"
#include "ldmd/hfm_eulerian.hpp"
#include "ldmd/hfm_lagrangian.hpp"
#include "ldmd/levelset.hpp"
#include "ldmd/pod.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace ldmd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// methods and configuration

std::string to_string(Method m) {
    switch (m) {
        case Method::EulerianDmd: return "eulerian-dmd";
        case Method::EulerianPod: return "eulerian-pod";
        case Method::LagrangianDmd: return "lagrangian-dmd";
        case Method::LagrangianPod: return "lagrangian-pod";
        case Method::LevelSetDmd: return "levelset-dmd";
    }
    return "lagrangian-dmd";
}

Method method_from_string(const std::string& name) {
    for (Method m : {Method::EulerianDmd, Method::EulerianPod, Method::LagrangianDmd, Method::LagrangianPod,
                     Method::LevelSetDmd})
        if (to_string(m) == name) return m;
    throw std::invalid_argument("unknown method: " + name);
}

std::vector<Method> parse_methods(const std::string& comma_list) {
    std::vector<Method> out;
    std::stringstream ss(comma_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(method_from_string(item));
    }
    return out;
}

std::vector<Method> default_methods(Preset p) {
    switch (p) {
        case Preset::Test0Diffusion:
        case Preset::Test0Advection: return {Method::EulerianDmd, Method::EulerianPod};
        case Preset::LevelSet: return {Method::LevelSetDmd};
        default: return {Method::LagrangianDmd, Method::LagrangianPod};
    }
}

ProblemSpec ExperimentConfig::problem() const {
    ProblemSpec spec;
    if (preset != Preset::Custom) {
        spec = preset_problem(preset, scale);
    } else {
        spec.domain_lo = domain_lo;
        spec.domain_hi = domain_hi;
        spec.t_final = t_final;
        spec.n_cells = 200;
        spec.n_steps = 100;
        if (bc == "periodic")
            spec.bc = Boundary::Periodic;
        else if (bc == "dirichlet-zero")
            spec.bc = Boundary::DirichletZero;
        else
            throw std::invalid_argument("unknown boundary condition: " + bc);
        if (flux == "linear")
            flux::set_linear(spec, speed);
        else if (flux == "burgers")
            flux::set_burgers(spec);
        else
            throw std::invalid_argument("unknown flux: " + flux);
        spec.diffusion = constant_diffusion(diffusion);
        if (initial == "pulse")
            spec.initial_u0 = gaussian_pulse;
        else if (initial == "sine")
            spec.initial_u0 = [](double x) { return 1.0 + std::sin(x); };
        else
            throw std::invalid_argument("unknown initial condition: " + initial);
    }
    if (n_cells) spec.n_cells = *n_cells;
    if (n_steps) spec.n_steps = *n_steps;
    return spec;
}

int ExperimentConfig::training_count() const {
    if (n_snapshots) return *n_snapshots;
    if (preset != Preset::Custom && !n_steps) return preset_training_count(preset, scale);
    return problem().n_steps / 4;
}

std::vector<int> ExperimentConfig::ranks() const {
    if (fixed_rank) return {*fixed_rank};
    if (epsilon || preset == Preset::Custom) return {0};
    std::vector<int> r = preset_fixed_ranks(preset);
    return r.empty() ? std::vector<int>{0} : r;
}

double ExperimentConfig::energy_epsilon() const {
    if (epsilon) return *epsilon;
    return preset == Preset::Custom ? 1e-8 : preset_epsilon(preset);
}

std::vector<Method> ExperimentConfig::effective_methods() const {
    if (!methods.empty()) return methods;
    return preset == Preset::Custom ? std::vector<Method>{Method::LagrangianDmd, Method::LagrangianPod}
                                    : default_methods(preset);
}

int ExperimentConfig::stride() const {
    if (output_stride > 0) return output_stride;
    return std::max(1, problem().n_steps / 100);
}

void ExperimentConfig::validate() const {
    const ProblemSpec spec = problem();
    spec.validate();
    const int m = training_count();
    if (m < 2 || m >= spec.n_steps)
        throw InvalidProblem("training count m = " + std::to_string(m) + " must satisfy 2 <= m < M = " +
                             std::to_string(spec.n_steps));
    if (fixed_rank && *fixed_rank < 1) throw InvalidProblem("rank must be positive");
    if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) throw InvalidProblem("epsilon must lie in (0, 1)");
    if (levelset_ny < 0 || output_stride < 0) throw InvalidProblem("levelset_ny and output_stride must be >= 0");
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    auto as_int = [&] {
        size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("not an integer for " + key + ": " + value);
        return v;
    };
    auto as_double = [&] {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("not a number for " + key + ": " + value);
        return v;
    };
    if (key == "preset") cfg.preset = preset_from_string(value);
    else if (key == "scale") cfg.scale = as_int();
    else if (key == "n_cells") cfg.n_cells = as_int();
    else if (key == "n_steps") cfg.n_steps = as_int();
    else if (key == "n_snapshots" || key == "m") cfg.n_snapshots = as_int();
    else if (key == "epsilon") cfg.epsilon = as_double();
    else if (key == "rank" || key == "fixed_rank") cfg.fixed_rank = as_int();
    else if (key == "methods") cfg.methods = parse_methods(value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "levelset_ny") cfg.levelset_ny = as_int();
    else if (key == "output_stride") cfg.output_stride = as_int();
    else if (key == "domain_lo") cfg.domain_lo = as_double();
    else if (key == "domain_hi") cfg.domain_hi = as_double();
    else if (key == "t_final") cfg.t_final = as_double();
    else if (key == "bc") cfg.bc = value;
    else if (key == "flux") cfg.flux = value;
    else if (key == "speed") cfg.speed = as_double();
    else if (key == "diffusion") cfg.diffusion = as_double();
    else if (key == "initial") cfg.initial = value;
    else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return parse_config(in, std::move(base));
}

const MethodResult* RunRecord::find(Method m, int requested_rank) const {
    for (const auto& r : methods)
        if (r.method == m && (requested_rank < 0 || r.requested_rank == requested_rank)) return &r;
    return nullptr;
}

// ---------------------------------------------------------------------------
// running

namespace {

struct HfmData {
    EulerianRun eulerian;
    std::optional<LagrangianRun> lagrangian;
    std::optional<LevelSetRun> levelset;
    std::optional<LevelSetField> levelset_initial;
};

Matrix leading_real_modes(const ComplexMatrix& modes, Eigen::Index value_rows) {
    const Eigen::Index k = std::min<Eigen::Index>(3, modes.cols());
    return modes.real().bottomRows(value_rows).leftCols(k);
}

void fill_state_errors(MethodResult& res, const RunRecord& rec) {
    const int M = rec.spec.n_steps;
    res.report.state_errors.resize(M);
    for (int k = 1; k <= M; ++k) {
        const auto ref = rec.reference.col(k);
        const double e = (res.states.col(k - 1) - ref).norm();
        const double s = ref.norm();
        res.report.state_errors[k - 1] = s > 0.0 ? e / s : e;
    }
}

void init_report(MethodResult& res, const ProblemSpec& spec) {
    res.report.dt = spec.dt();
    res.report.times.clear();
    for (int k = 1; k <= spec.n_steps; ++k) res.report.times.push_back(k);
    res.report.errors.resize(spec.n_steps);
}

Vector lagrangian_observable(const LagrangianRun& lag, int k) {
    Vector y(2 * lag.positions.rows());
    y << lag.positions.col(k), lag.values.col(k);
    return y;
}

SnapshotMatrix from_time_zero(Matrix data) {
    SnapshotMatrix s{std::move(data), {}};
    for (int k = 0; k < s.cols(); ++k) s.col_times.push_back(k);
    return s;
}

void run_method(MethodResult& res, const RunRecord& rec, const HfmData& hfm) {
    const ProblemSpec& spec = rec.spec;
    const int M = spec.n_steps;
    const int n = spec.n_cells;
    const Grid1D grid = spec.eulerian_grid();
    const Extrapolation ext = spec.extrapolation();
    const RankSelection sel = res.requested_rank > 0 ? RankSelection::fixed(res.requested_rank)
                                                     : RankSelection::energy(rec.config.energy_epsilon());
    init_report(res, spec);

    switch (res.method) {
        case Method::EulerianDmd: {
            auto t0 = Clock::now();
            DmdModel model = fit_dmd(hfm.eulerian.snapshots, sel);
            res.fit_seconds = seconds_since(t0);
            t0 = Clock::now();
            res.states.resize(n, M);
            for (int k = 1; k <= M; ++k) res.states.col(k - 1) = predict(model, k);
            res.rollout_seconds = seconds_since(t0);
            res.observables = res.states;
            for (int k = 1; k <= M; ++k) res.report.errors[k - 1] = (res.states.col(k - 1) - rec.reference.col(k)).norm();
            fill_state_errors(res, rec);
            const SnapshotMatrix reference = from_time_zero(rec.reference);
            attach_bound(res.report, model, hfm.eulerian.snapshots, &reference);
            res.rank = model.rank();
            res.leading_modes = leading_real_modes(model.modes, n);
            res.model = std::move(model);
            break;
        }
        case Method::EulerianPod: {
            auto t0 = Clock::now();
            const PodBasis basis = fit_pod(hfm.eulerian.snapshots, sel, Frame::Eulerian);
            res.fit_seconds = seconds_since(t0);
            const PodRun run = run_pod_rom(basis, rec.reference.col(0), spec, M);
            res.rollout_seconds = run.seconds;
            res.states = run.trajectory.data.rightCols(M);
            res.observables = res.states;
            res.iterations = run.iterations;
            for (int k = 1; k <= M; ++k) res.report.errors[k - 1] = (res.states.col(k - 1) - rec.reference.col(k)).norm();
            fill_state_errors(res, rec);
            res.rank = basis.rank();
            res.leading_modes = basis.basis.leftCols(std::min(3, basis.rank()));
            break;
        }
        case Method::LagrangianDmd: {
            const LagrangianRun& lag = *hfm.lagrangian;
            auto t0 = Clock::now();
            DmdModel model = fit_lagrangian_dmd(lag.stacked, sel);
            res.fit_seconds = seconds_since(t0);
            t0 = Clock::now();
            res.observables.resize(2 * n, M);
            for (int k = 1; k <= M; ++k) res.observables.col(k - 1) = predict(model, k);
            res.rollout_seconds = seconds_since(t0);
            res.states.resize(n, M);
            for (int k = 1; k <= M; ++k) {
                res.states.col(k - 1) = reconstruct_state(res.observables.col(k - 1), grid, ext, k).on_eulerian;
                res.report.errors[k - 1] = (res.observables.col(k - 1) - lagrangian_observable(lag, k)).norm();
            }
            fill_state_errors(res, rec);
            Matrix obs(2 * n, M + 1);
            obs << lag.positions, lag.values;
            const SnapshotMatrix reference = from_time_zero(std::move(obs));
            attach_bound(res.report, model, lag.stacked, &reference);
            res.rank = model.rank();
            res.leading_modes = leading_real_modes(model.modes, n);
            res.model = std::move(model);
            break;
        }
        case Method::LagrangianPod: {
            const LagrangianRun& lag = *hfm.lagrangian;
            auto t0 = Clock::now();
            const PodBasis basis = fit_pod(lag.stacked, sel, Frame::Lagrangian);
            res.fit_seconds = seconds_since(t0);
            const PodRun run = run_pod_rom(basis, lagrangian_observable(lag, 0), spec, M);
            res.rollout_seconds = run.seconds;
            res.observables = run.trajectory.data.rightCols(M);
            res.iterations = run.iterations;
            res.states.resize(n, M);
            for (int k = 1; k <= M; ++k) {
                res.states.col(k - 1) = reconstruct_state(res.observables.col(k - 1), grid, ext, k).on_eulerian;
                res.report.errors[k - 1] = (res.observables.col(k - 1) - lagrangian_observable(lag, k)).norm();
            }
            fill_state_errors(res, rec);
            res.rank = basis.rank();
            res.leading_modes = basis.basis.bottomRows(n).leftCols(std::min(3, basis.rank()));
            break;
        }
        case Method::LevelSetDmd: {
            const LevelSetRun& ls = *hfm.levelset;
            auto t0 = Clock::now();
            DmdModel model = levelset_dmd(ls.observables, sel);
            res.fit_seconds = seconds_since(t0);
            t0 = Clock::now();
            std::vector<Vector> predictions;
            predictions.reserve(static_cast<size_t>(M));
            for (int k = 1; k <= M; ++k) predictions.push_back(predict(model, k));
            res.rollout_seconds = seconds_since(t0);
            res.states.resize(n, M);
            for (int k = 1; k <= M; ++k) {
                const Vector& y = predictions[static_cast<size_t>(k - 1)];
                res.states.col(k - 1) =
                    extract_zero_contour(field_from_observable(y, ls.x_grid, ls.y_grid, ext, k)).values;
                res.report.errors[k - 1] =
                    (y - levelset_lagrangian_observable(*hfm.levelset_initial, spec, k)).norm();
            }
            fill_state_errors(res, rec);
            Matrix obs(ls.observables.rows(), M + 1);
            for (int k = 0; k <= M; ++k) obs.col(k) = levelset_lagrangian_observable(*hfm.levelset_initial, spec, k);
            const SnapshotMatrix reference = from_time_zero(std::move(obs));
            attach_bound(res.report, model, ls.observables, &reference);
            res.rank = model.rank();
            res.model = std::move(model);
            break;
        }
    }
    if (!res.states.allFinite()) throw NumericalFailure("prediction contains non-finite values");
    res.ok = true;
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config) {
    config.validate();
    RunRecord rec;
    rec.config = config;
    rec.spec = config.problem();
    rec.m = config.training_count();
    const auto methods = config.effective_methods();
    auto uses = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

    HfmData hfm;
    hfm.eulerian = run_eulerian_hfm(rec.spec, rec.m);
    rec.eulerian_hfm_seconds = hfm.eulerian.seconds;
    rec.reference = hfm.eulerian.trajectory;
    if (uses(Method::LagrangianDmd) || uses(Method::LagrangianPod)) {
        hfm.lagrangian = run_lagrangian_hfm(rec.spec, rec.m);
        rec.lagrangian_hfm_seconds = hfm.lagrangian->seconds;
        rec.lagrangian_positions = hfm.lagrangian->positions;
        rec.lagrangian_values = hfm.lagrangian->values;
    }
    if (uses(Method::LevelSetDmd)) {
        const int ny = config.levelset_ny > 0 ? config.levelset_ny : default_levelset_ny(rec.spec.n_cells);
        hfm.levelset = run_levelset_lagrangian(rec.spec, ny, rec.m);
        hfm.levelset_initial = embed_initial(rec.spec.initial_u0, hfm.levelset->x_grid, hfm.levelset->y_grid);
        if (!rec.lagrangian_hfm_seconds) rec.lagrangian_hfm_seconds = hfm.levelset->seconds;
    }

    const auto ranks = config.ranks();
    for (Method m : methods) {
        for (int r : ranks) {
            MethodResult res;
            res.method = m;
            res.requested_rank = r;
            res.label = to_string(m) + (ranks.size() > 1 || r > 0 ? "-r" + std::to_string(r) : "");
            try {
                run_method(res, rec, hfm);
            } catch (const std::exception& e) {
                res.ok = false;
                res.error = e.what();
            }
            rec.methods.push_back(std::move(res));
        }
    }
    if (!config.output_dir.empty()) write_outputs(rec, config.output_dir);
    return rec;
}

// ---------------------------------------------------------------------------
// output

namespace {

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Figures from the CSV files in this directory: solution profiles,
error curves with the DMD bound, and leading modes."""
import glob
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
os.chdir(sys.argv[1] if len(sys.argv) > 1 else here)
manifest = json.load(open("manifest.json"))
spec = manifest["problem"]
x = np.linspace(spec["domain_lo"], spec["domain_hi"], spec["n_cells"],
                endpoint=spec["bc"] != "periodic")


def load(path):
    return np.genfromtxt(path, delimiter=",", names=True, comments="#")


ref = np.loadtxt("snapshots.csv", delimiter=",", skiprows=1)
for path in sorted(glob.glob("*_states.csv")):
    label = path[: -len("_states.csv")]
    rom = np.loadtxt(path, delimiter=",", skiprows=1)
    fig, ax = plt.subplots(figsize=(6, 4))
    for row in np.linspace(0, len(rom) - 1, 5).astype(int):
        t = rom[row, 0]
        k = np.argmin(np.abs(ref[:, 0] - t))
        (line,) = ax.plot(x, ref[k, 1:], lw=1.5)
        ax.plot(x, rom[row, 1:], "--", color=line.get_color(), lw=1.0,
                label="t=%.2f" % t)
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(label + " (dashed) vs reference")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(label + "_profiles.png", dpi=150)
    plt.close(fig)

for path in sorted(glob.glob("errors_*.csv")):
    label = path[len("errors_"): -len(".csv")]
    e = load(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(e["t"], e["error_observable"], label="observable error")
    if np.isfinite(e["bound"]).any():
        ax.semilogy(e["t"], e["bound"], "k--", label="bound")
    ax.semilogy(e["t"], e["error_state"], label="relative state error")
    ax.set_xlabel("t")
    ax.legend()
    ax.set_title(label)
    fig.tight_layout()
    fig.savefig(label + "_errors.png", dpi=150)
    plt.close(fig)

if os.path.exists("modes.csv"):
    modes = load("modes.csv")
    names = [n for n in modes.dtype.names if n != "x"]
    if names:
        fig, ax = plt.subplots(figsize=(6, 4))
        for n in names:
            ax.plot(modes["x"], modes[n], label=n)
        ax.set_xlabel("x")
        ax.legend(fontsize=6)
        fig.tight_layout()
        fig.savefig("modes.png", dpi=150)
        plt.close(fig)
)PY";

std::vector<double> stored_times(const ProblemSpec& spec, int first, int stride) {
    std::vector<double> t;
    for (int k = first; k <= spec.n_steps; k += stride) t.push_back(spec.time(k));
    return t;
}

// columns first, first + stride, ... of a matrix whose column 0 is time `offset`
Matrix strided(const Matrix& m, int offset, int first, int last, int stride) {
    std::vector<Eigen::Index> idx;
    for (int k = first; k <= last; k += stride) idx.push_back(k - offset);
    Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = m.col(idx[i]);
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

json problem_json(const ProblemSpec& spec) {
    return {{"domain_lo", spec.domain_lo},
            {"domain_hi", spec.domain_hi},
            {"n_cells", spec.n_cells},
            {"n_steps", spec.n_steps},
            {"t_final", spec.t_final},
            {"dt", spec.dt()},
            {"dx", spec.dx()},
            {"bc", spec.bc == Boundary::Periodic ? "periodic" : "dirichlet-zero"}};
}

}  // namespace

json timing_json(const RunRecord& rec) {
    json j;
    j["preset"] = to_string(rec.config.preset);
    j["scale"] = rec.config.scale;
    j["n_cells"] = rec.spec.n_cells;
    j["n_steps"] = rec.spec.n_steps;
    j["m"] = rec.m;
    j["eulerian_hfm_seconds"] = rec.eulerian_hfm_seconds;
    j["lagrangian_hfm_seconds"] = rec.lagrangian_hfm_seconds ? json(*rec.lagrangian_hfm_seconds) : json(nullptr);
    j["methods"] = json::array();
    for (const auto& r : rec.methods) {
        json mj{{"method", to_string(r.method)},
                {"label", r.label},
                {"requested_rank", r.requested_rank},
                {"rank", r.rank},
                {"ok", r.ok},
                {"fit_seconds", r.fit_seconds},
                {"rollout_seconds", r.rollout_seconds},
                {"total_seconds", r.total_seconds()}};
        if (!r.ok) mj["error"] = r.error;
        if (!r.iterations.empty())
            mj["newton_iterations_max"] = *std::max_element(r.iterations.begin(), r.iterations.end());
        j["methods"].push_back(mj);
    }
    return j;
}

void write_outputs(const RunRecord& rec, const std::string& dir) {
    const fs::path root(dir);
    fs::create_directories(root);
    const ProblemSpec& spec = rec.spec;
    const int M = spec.n_steps;
    const int stride = rec.config.stride();
    std::vector<std::string> files;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(root / name, content);
        files.push_back(name);
    };

    {
        std::ostringstream s;
        csv::write_time_rows(s, strided(rec.reference, 0, 0, M, stride), stored_times(spec, 0, stride));
        emit("snapshots.csv", s.str());
    }
    if (rec.lagrangian_positions.size() > 0) {
        std::ostringstream p, v;
        csv::write_time_rows(p, strided(rec.lagrangian_positions, 0, 0, M, stride), stored_times(spec, 0, stride));
        csv::write_time_rows(v, strided(rec.lagrangian_values, 0, 0, M, stride), stored_times(spec, 0, stride));
        emit("lagrangian_positions.csv", p.str());
        emit("lagrangian_values.csv", v.str());
    }

    bool first_errors = true;
    for (const auto& r : rec.methods) {
        if (!r.ok) continue;
        std::ostringstream s;
        csv::write_time_rows(s, strided(r.states, 1, 1, M, stride), stored_times(spec, 1, stride));
        emit(r.label + "_states.csv", s.str());
        std::ostringstream e;
        write_error_csv(r.report, e);
        emit("errors_" + r.label + ".csv", e.str());
        if (first_errors) {
            emit("errors.csv", e.str());
            first_errors = false;
        }
        if (r.model) {
            std::ostringstream mdl;
            save_model(*r.model, mdl);
            emit(r.label + "_model.txt", mdl.str());
        }
    }

    {
        const Vector x = spec.eulerian_grid().nodes();
        std::ostringstream s;
        s << 'x';
        std::vector<const Matrix*> cols;
        for (const auto& r : rec.methods) {
            if (!r.ok || r.leading_modes.rows() != spec.n_cells) continue;
            for (Eigen::Index k = 0; k < r.leading_modes.cols(); ++k) s << ',' << r.label << "_mode_" << (k + 1);
            cols.push_back(&r.leading_modes);
        }
        s << '\n';
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            s << csv::number(x[i]);
            for (const Matrix* m : cols)
                for (Eigen::Index k = 0; k < m->cols(); ++k) s << ',' << csv::number((*m)(i, k));
            s << '\n';
        }
        emit("modes.csv", s.str());
    }

    emit("timing.json", timing_json(rec).dump(2) + "\n");
    emit("plot.py", kPlotScript);
    files.push_back("manifest.json");

    json manifest;
    manifest["preset"] = to_string(rec.config.preset);
    manifest["description"] = preset_description(rec.config.preset);
    manifest["presets"] = json::object();
    for (Preset p : all_presets()) manifest["presets"][to_string(p)] = preset_description(p);
    manifest["problem"] = problem_json(spec);
    manifest["config"] = {{"scale", rec.config.scale},
                          {"m", rec.m},
                          {"epsilon", rec.config.energy_epsilon()},
                          {"ranks", rec.config.ranks()},
                          {"output_stride", stride}};
    manifest["methods"] = json::array();
    for (const auto& r : rec.methods) {
        json mj{{"label", r.label}, {"ok", r.ok}, {"rank", r.rank}};
        if (r.ok && r.report.bound.size()) {
            mj["eps_m"] = r.report.eps_m;
            mj["eps_m_training"] = r.report.eps_m_training;
            mj["phi_pinv_fnorm"] = r.report.phi_pinv_fnorm;
            mj["bound_holds"] = r.report.bound_holds();
        }
        manifest["methods"].push_back(mj);
    }
    manifest["files"] = files;
    write_file(root / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// timing table

TimingColumn timing_column(const json& t) {
    TimingColumn c;
    c.name = t.value("preset", std::string("?"));
    if (t.contains("scale") && t["scale"].get<int>() != 1) c.name += "/s" + std::to_string(t["scale"].get<int>());
    if (t.contains("eulerian_hfm_seconds") && t["eulerian_hfm_seconds"].is_number())
        c.eulerian_hfm_seconds = t["eulerian_hfm_seconds"].get<double>();
    if (t.contains("lagrangian_hfm_seconds") && t["lagrangian_hfm_seconds"].is_number())
        c.lagrangian_hfm_seconds = t["lagrangian_hfm_seconds"].get<double>();
    // Lagrangian methods take precedence over Eulerian ones in a column
    const json methods = t.value("methods", json::array());
    auto pick = [&](std::initializer_list<const char*> names) -> const json* {
        for (const char* name : names)
            for (const auto& m : methods)
                if (m.value("method", "") == name && m.value("ok", false)) return &m;
        return nullptr;
    };
    const json* dmd = pick({"lagrangian-dmd", "levelset-dmd", "eulerian-dmd"});
    const json* pod = pick({"lagrangian-pod", "eulerian-pod"});
    if (dmd) {
        c.dmd_seconds = (*dmd)["total_seconds"].get<double>();
        c.rank = (*dmd)["rank"].get<int>();
    }
    if (pod) {
        c.pod_seconds = (*pod)["total_seconds"].get<double>();
        if (!c.rank) c.rank = (*pod)["rank"].get<int>();
    }
    return c;
}

namespace {
struct TableRow {
    const char* title;
    const char* key;
    std::function<std::optional<double>(const TimingColumn&)> get;
    bool integer;
};

std::vector<TableRow> table_rows() {
    return {
        {"Rank truncation r", "rank",
         [](const TimingColumn& c) { return c.rank ? std::optional<double>(*c.rank) : std::nullopt; }, true},
        {"DMD time (s)", "dmd_seconds", [](const TimingColumn& c) { return c.dmd_seconds; }, false},
        {"POD time (s)", "pod_seconds", [](const TimingColumn& c) { return c.pod_seconds; }, false},
        {"Eulerian HFM time (s)", "eulerian_hfm_seconds", [](const TimingColumn& c) { return c.eulerian_hfm_seconds; },
         false},
        {"Lagrangian HFM time (s)", "lagrangian_hfm_seconds",
         [](const TimingColumn& c) { return c.lagrangian_hfm_seconds; }, false},
    };
}
}  // namespace

std::string format_timing_table(const std::vector<TimingColumn>& columns) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head{""};
    for (const auto& c : columns) head.push_back(c.name);
    cells.push_back(head);
    for (const auto& row : table_rows()) {
        std::vector<std::string> line{row.title};
        bool any = false;
        for (const auto& c : columns) {
            const auto v = row.get(c);
            any = any || v.has_value();
            line.push_back(!v ? "-" : row.integer ? std::to_string(static_cast<int>(*v)) : csv::number(*v));
        }
        if (any) cells.push_back(line);
    }
    std::vector<size_t> width(head.size(), 0);
    for (const auto& line : cells)
        for (size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    std::ostringstream out;
    for (const auto& line : cells) {
        out << '|';
        for (size_t i = 0; i < line.size(); ++i)
            out << ' ' << line[i] << std::string(width[i] - line[i].size(), ' ') << " |";
        out << '\n';
    }
    return out.str();
}

json timing_table_json(const std::vector<TimingColumn>& columns) {
    json j;
    j["columns"] = json::array();
    for (const auto& c : columns) j["columns"].push_back(c.name);
    j["rows"] = json::object();
    for (const auto& row : table_rows()) {
        json values = json::array();
        bool any = false;
        for (const auto& c : columns) {
            const auto v = row.get(c);
            any = any || v.has_value();
            values.push_back(v ? json(*v) : json(nullptr));
        }
        if (any) j["rows"][row.key] = values;
    }
    return j;
}

// ---------------------------------------------------------------------------
// validation

std::vector<std::string> validate_output(const std::string& dir) {
    std::vector<std::string> issues;
    const fs::path root(dir);
    if (!fs::is_directory(root)) return {"not a directory: " + dir};

    auto load_json = [&](const char* name) -> std::optional<json> {
        std::ifstream in(root / name);
        if (!in) {
            issues.push_back(std::string("missing ") + name);
            return std::nullopt;
        }
        try {
            return json::parse(in);
        } catch (const std::exception& e) {
            issues.push_back(std::string(name) + ": " + e.what());
            return std::nullopt;
        }
    };
    const auto manifest = load_json("manifest.json");
    const auto timing = load_json("timing.json");
    int n_cells = -1;
    if (manifest) {
        if (!manifest->contains("problem")) issues.push_back("manifest.json: no problem section");
        else n_cells = (*manifest)["problem"].value("n_cells", -1);
        if (!manifest->contains("description")) issues.push_back("manifest.json: no preset description");
    }
    if (timing) {
        auto check_duration = [&](const json& v, const std::string& what) {
            if (v.is_null()) return;
            if (!v.is_number() || v.get<double>() < 0.0) issues.push_back("timing.json: bad duration " + what);
        };
        check_duration(timing->value("eulerian_hfm_seconds", json(nullptr)), "eulerian_hfm_seconds");
        check_duration(timing->value("lagrangian_hfm_seconds", json(nullptr)), "lagrangian_hfm_seconds");
        for (const auto& m : timing->value("methods", json::array()))
            for (const char* k : {"fit_seconds", "rollout_seconds", "total_seconds"})
                check_duration(m.value(k, json(nullptr)), m.value("label", std::string("?")) + "." + k);
    }

    auto check_time_rows = [&](const fs::path& path, bool monotone_rows) {
        csv::Table t;
        try {
            t = csv::read_file(path.string());
        } catch (const std::exception& e) {
            issues.push_back(path.filename().string() + ": " + e.what());
            return;
        }
        const std::string name = path.filename().string();
        if (t.header.empty() || t.header[0] != "t") {
            issues.push_back(name + ": first column must be t");
            return;
        }
        for (size_t i = 1; i < t.header.size(); ++i)
            if (t.header[i].rfind("_" + std::to_string(i)) == std::string::npos) {
                issues.push_back(name + ": header column " + std::to_string(i) + " is " + t.header[i]);
                break;
            }
        if (n_cells > 0 && t.header.size() != static_cast<size_t>(n_cells) + 1)
            issues.push_back(name + ": expected " + std::to_string(n_cells) + " value columns");
        for (size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            if (r > 0 && !(row[0] > t.rows[r - 1][0])) issues.push_back(name + ": times not increasing at row " + std::to_string(r + 1));
            for (double v : row)
                if (!std::isfinite(v)) {
                    issues.push_back(name + ": non-finite value at row " + std::to_string(r + 1));
                    break;
                }
            if (monotone_rows)
                for (size_t i = 2; i < row.size(); ++i)
                    if (!(row[i] > row[i - 1])) {
                        issues.push_back(name + ": positions not increasing at row " + std::to_string(r + 1));
                        break;
                    }
        }
    };

    if (!fs::exists(root / "snapshots.csv")) issues.push_back("missing snapshots.csv");
    else check_time_rows(root / "snapshots.csv", false);
    if (fs::exists(root / "lagrangian_positions.csv")) check_time_rows(root / "lagrangian_positions.csv", true);
    if (fs::exists(root / "lagrangian_values.csv")) check_time_rows(root / "lagrangian_values.csv", false);

    for (const auto& entry : fs::directory_iterator(root)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 11 && name.substr(name.size() - 11) == "_states.csv") check_time_rows(entry.path(), false);
        if (name.rfind("errors", 0) != 0 || entry.path().extension() != ".csv") continue;
        csv::Table t;
        try {
            t = csv::read_file(entry.path().string());
        } catch (const std::exception& e) {
            issues.push_back(name + ": " + e.what());
            continue;
        }
        const std::vector<std::string> expected{"n", "t", "error_state", "error_observable", "bound"};
        if (t.header != expected) {
            issues.push_back(name + ": unexpected header");
            continue;
        }
        double scale = 0.0;
        for (const auto& row : t.rows)
            if (std::isfinite(row[4])) scale = std::max(scale, std::abs(row[4]));
        const double* prev = nullptr;
        const double* prev2 = nullptr;
        for (const auto& row : t.rows) {
            if (row[2] < 0.0 || row[3] < 0.0) issues.push_back(name + ": negative error at n=" + csv::number(row[0]));
            if (std::isfinite(row[4])) {
                if (!(row[4] >= row[3]))
                    issues.push_back(name + ": bound below error at n=" + csv::number(row[0]));
                if (prev && prev2 && std::abs((row[4] - *prev) - (*prev - *prev2)) > 1e-9 * std::max(1.0, scale))
                    issues.push_back(name + ": bound not affine at n=" + csv::number(row[0]));
                prev2 = prev;
                prev = &row[4];
            }
        }
    }

    if (fs::exists(root / "modes.csv")) {
        try {
            const csv::Table t = csv::read_file((root / "modes.csv").string());
            if (t.header.empty() || t.header[0] != "x") issues.push_back("modes.csv: first column must be x");
        } catch (const std::exception& e) {
            issues.push_back(std::string("modes.csv: ") + e.what());
        }
    }
    return issues;
}

}  // namespace ldmd
