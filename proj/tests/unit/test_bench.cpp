#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ldmd/bench.hpp"
#include "ldmd/csv.hpp"

using namespace ldmd;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ldmd_unit_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("numbers keep 17 significant digits") {
    CHECK(csv::number(0.1) == "0.10000000000000001");
    CHECK(std::stod(csv::number(M_PI)) == M_PI);
    CHECK(csv::number(std::nan("")) == "nan");
}

TEST_CASE("CSV round trip") {
    Matrix data(3, 2);
    data << 1.0 / 3.0, 2.0, -1e-300, 4.5, 7.0, 1e20;
    std::stringstream s;
    csv::write_time_rows(s, data, {0.1, 0.2});
    const csv::Table t = csv::read(s);
    CHECK(t.header == std::vector<std::string>{"t", "x_1", "x_2", "x_3"});
    CHECK(t.rows[0][1] == 1.0 / 3.0);
    CHECK(t.rows[0][2] == -1e-300);
    CHECK(t.rows[1][3] == 1e20);
    CHECK(t.column("x_2") == 2);
    CHECK(t.column("y") == -1);
}

TEST_CASE("malformed CSV") {
    std::stringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS(csv::read(ragged));
    std::stringstream text("a,b\n1,zz\n");
    CHECK_THROWS(csv::read(text));
}

TEST_CASE("method names") {
    CHECK(parse_methods("lagrangian-dmd, eulerian-pod").size() == 2);
    CHECK(method_from_string("levelset-dmd") == Method::LevelSetDmd);
    CHECK_THROWS(method_from_string("dmd"));
    CHECK(is_dmd(Method::EulerianDmd));
    CHECK_FALSE(is_dmd(Method::LagrangianPod));
}

TEST_CASE("config parsing") {
    std::stringstream in(
        "# desk run\n"
        "preset = test2\n"
        "scale=10\n"
        "epsilon = 1e-6   # looser\n"
        "methods = lagrangian-dmd\n"
        "\n");
    const ExperimentConfig c = parse_config(in);
    CHECK(c.preset == Preset::Test2);
    CHECK(c.scale == 10);
    CHECK(*c.epsilon == 1e-6);
    CHECK(c.methods.size() == 1);
    CHECK(c.training_count() == 25);
    CHECK(c.problem().n_cells == 200);
    CHECK(c.ranks() == std::vector<int>{0});

    std::stringstream bad_key("nonsense = 1\n");
    CHECK_THROWS(parse_config(bad_key));
    std::stringstream bad_value("scale = ten\n");
    CHECK_THROWS(parse_config(bad_value));
    std::stringstream no_eq("scale 10\n");
    CHECK_THROWS(parse_config(no_eq));
}

TEST_CASE("preset defaults") {
    ExperimentConfig c;
    c.preset = Preset::Test0Advection;
    CHECK(c.ranks() == std::vector<int>{20, 30});
    CHECK(c.energy_epsilon() == 1e-4);
    CHECK(c.training_count() == 250);
    c.preset = Preset::Test1;
    CHECK(c.energy_epsilon() == 1e-8);
    c.scale = 3;
    CHECK_THROWS(c.validate());
    c.scale = 10;
    c.n_snapshots = 100;
    CHECK_THROWS_AS(c.validate(), InvalidProblem);
}

TEST_CASE("experiment writes a valid directory") {
    const fs::path dir = scratch_dir("run");
    ExperimentConfig c;
    c.preset = Preset::Test1;
    c.scale = 10;
    c.output_dir = dir.string();
    const RunRecord rec = run_experiment(c);
    REQUIRE(rec.methods.size() == 2);
    for (const auto& r : rec.methods) CHECK(r.ok);
    CHECK(rec.find(Method::LagrangianDmd)->report.bound_holds());
    for (const char* f : {"snapshots.csv", "lagrangian_positions.csv", "lagrangian_values.csv", "errors.csv",
                          "errors_lagrangian-dmd.csv", "lagrangian-dmd_states.csv", "modes.csv", "timing.json",
                          "manifest.json", "plot.py"})
        CHECK_MESSAGE(fs::exists(dir / f), f);
    CHECK(validate_output(dir.string()).empty());

    // corrupt a value row and the validator notices
    std::ofstream(dir / "snapshots.csv", std::ios::app) << "0,1\n";
    CHECK_FALSE(validate_output(dir.string()).empty());
    fs::remove_all(dir);
}

TEST_CASE("failing methods are captured") {
    ExperimentConfig c;
    c.preset = Preset::Test0Diffusion;
    c.scale = 10;
    const RunRecord rec = run_experiment(c);
    for (const auto& r : rec.methods) {
        CHECK_FALSE(r.ok);
        CHECK(r.error.find("zero singular value") != std::string::npos);
    }
}

TEST_CASE("timing table") {
    nlohmann::json t = {{"preset", "test1"},
                        {"scale", 1},
                        {"eulerian_hfm_seconds", 2.0},
                        {"lagrangian_hfm_seconds", nullptr},
                        {"methods",
                         {{{"method", "lagrangian-dmd"}, {"ok", true}, {"rank", 3}, {"total_seconds", 0.1}}}}};
    const TimingColumn col = timing_column(t);
    CHECK(*col.rank == 3);
    CHECK(!col.pod_seconds);
    const std::string one = format_timing_table({col});
    CHECK(one.find("test1") != std::string::npos);
    CHECK(one.find("POD time") == std::string::npos);
    CHECK(one.find("Lagrangian HFM") == std::string::npos);
    const nlohmann::json j = timing_table_json({col, col});
    CHECK(j["columns"].size() == 2);
    CHECK(j["rows"]["dmd_seconds"][1] == 0.1);
    CHECK_FALSE(j["rows"].contains("pod_seconds"));
}
