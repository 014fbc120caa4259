// ldmd: run benchmark presets, tabulate timings, validate output directories.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ldmd/bench.hpp"
#include "ldmd/csv.hpp"

namespace {

std::string default_output_dir(const std::string& preset) {
    const char* root = std::getenv("LDMD_OUTPUT_ROOT");
    return (std::filesystem::path(root && *root ? root : "ldmd_output") / preset).string();
}

void print_summary(const ldmd::RunRecord& rec, std::ostream& out) {
    using ldmd::csv::number;
    out << "preset " << to_string(rec.config.preset) << ": N=" << rec.spec.n_cells << " M=" << rec.spec.n_steps
        << " m=" << rec.m << '\n';
    out << "eulerian HFM seconds " << number(rec.eulerian_hfm_seconds) << '\n';
    if (rec.lagrangian_hfm_seconds) out << "lagrangian HFM seconds " << number(*rec.lagrangian_hfm_seconds) << '\n';
    for (const auto& r : rec.methods) {
        out << r.label << ": ";
        if (!r.ok) {
            out << "FAILED " << r.error << '\n';
            continue;
        }
        const double final_err = r.report.state_errors.size() ? r.report.state_errors.tail(1)[0] : 0.0;
        out << "rank " << r.rank << ", seconds " << number(r.total_seconds()) << ", final relative error "
            << number(final_err);
        if (r.report.bound.size()) out << ", bound holds " << (r.report.bound_holds() ? "yes" : "no");
        out << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian and Eulerian reduced-order model benchmarks"};
    app.require_subcommand(1);

    std::string preset_name, config_path, methods, out_dir;
    int scale = 1, rank = 0, ny = 0, m = 0;
    double epsilon = 0.0;
    auto* run = app.add_subcommand("run", "Run a preset and write CSV/JSON outputs");
    run->add_option("preset", preset_name, "test0-diffusion, test0-advection, test1..test4, levelset or custom")
        ->required();
    run->add_option("--config", config_path, "Flat key = value config file");
    run->add_option("--scale", scale, "Divide N, M and m by this factor")->check(CLI::PositiveNumber);
    run->add_option("--epsilon", epsilon, "Energy truncation threshold");
    run->add_option("--rank", rank, "Fixed truncation rank")->check(CLI::PositiveNumber);
    run->add_option("--snapshots", m, "Training snapshot count m")->check(CLI::PositiveNumber);
    run->add_option("--methods", methods,
                    "Comma list of eulerian-dmd, eulerian-pod, lagrangian-dmd, lagrangian-pod, levelset-dmd");
    run->add_option("--levelset-ny", ny, "y resolution of the level-set grid")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory (default $LDMD_OUTPUT_ROOT/<preset>)");

    std::vector<std::string> table_dirs;
    bool table_json = false;
    auto* table = app.add_subcommand("table", "Timing table over run directories");
    table->add_option("dirs", table_dirs, "Run output directories")->required();
    table->add_flag("--json", table_json, "Emit JSON instead of text");

    std::string validate_dir;
    auto* validate = app.add_subcommand("validate", "Check the invariants of a run directory");
    validate->add_option("dir", validate_dir, "Run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ldmd::ExperimentConfig cfg;
            cfg.preset = ldmd::preset_from_string(preset_name);
            if (!config_path.empty()) cfg = ldmd::load_config_file(config_path, cfg);
            if (run->count("--scale")) cfg.scale = scale;
            if (run->count("--epsilon")) cfg.epsilon = epsilon;
            if (run->count("--rank")) cfg.fixed_rank = rank;
            if (run->count("--snapshots")) cfg.n_snapshots = m;
            if (run->count("--methods")) cfg.methods = ldmd::parse_methods(methods);
            if (run->count("--levelset-ny")) cfg.levelset_ny = ny;
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir(to_string(cfg.preset));
            const ldmd::RunRecord rec = ldmd::run_experiment(cfg);
            print_summary(rec, std::cout);
            std::cout << "wrote " << cfg.output_dir << '\n';
            for (const auto& r : rec.methods)
                if (!r.ok) return 3;
            return 0;
        }
        if (*table) {
            std::vector<ldmd::TimingColumn> cols;
            for (const auto& dir : table_dirs) {
                std::ifstream in(std::filesystem::path(dir) / "timing.json");
                if (!in) throw std::runtime_error("no timing.json in " + dir);
                cols.push_back(ldmd::timing_column(nlohmann::json::parse(in)));
            }
            if (table_json)
                std::cout << ldmd::timing_table_json(cols).dump(2) << '\n';
            else
                std::cout << ldmd::format_timing_table(cols);
            return 0;
        }
        if (*validate) {
            const auto issues = ldmd::validate_output(validate_dir);
            for (const auto& msg : issues) std::cout << "INVALID " << msg << '\n';
            if (issues.empty()) std::cout << "OK " << validate_dir << '\n';
            return issues.empty() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
