// Python bindings for the HFM solvers, DMD fitting and the benchmark driver.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "ldmd/bench.hpp"
#include "ldmd/dmd.hpp"
#include "ldmd/hfm_eulerian.hpp"
#include "ldmd/hfm_lagrangian.hpp"
#include "ldmd/presets.hpp"
#include "ldmd/svd.hpp"

namespace py = pybind11;
using namespace ldmd;

namespace {

RankSelection selection(int rank, double epsilon) {
    return rank > 0 ? RankSelection::fixed(rank) : RankSelection::energy(epsilon);
}

SnapshotMatrix snapshots(const Matrix& data, int first_time_index) {
    SnapshotMatrix s{data, {}};
    for (int k = 0; k < data.cols(); ++k) s.col_times.push_back(first_time_index + k);
    return s;
}

py::dict method_dict(const MethodResult& r) {
    py::dict d;
    d["label"] = r.label;
    d["method"] = to_string(r.method);
    d["ok"] = r.ok;
    d["error"] = r.error;
    d["rank"] = r.rank;
    d["fit_seconds"] = r.fit_seconds;
    d["rollout_seconds"] = r.rollout_seconds;
    d["times"] = r.report.times;
    d["state_errors"] = r.report.state_errors;
    d["observable_errors"] = r.report.errors;
    d["bound"] = r.report.bound;
    d["eps_m"] = r.report.eps_m;
    d["states"] = r.states;
    return d;
}

}  // namespace

PYBIND11_MODULE(_ldmd, m) {
    m.doc() = "Lagrangian and Eulerian DMD reduced-order models";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());
    py::register_exception<GridEntanglement>(m, "GridEntanglement", base.ptr());

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def_readonly("domain_lo", &ProblemSpec::domain_lo)
        .def_readonly("domain_hi", &ProblemSpec::domain_hi)
        .def_readonly("n_cells", &ProblemSpec::n_cells)
        .def_readonly("n_steps", &ProblemSpec::n_steps)
        .def_readonly("t_final", &ProblemSpec::t_final)
        .def_property_readonly("dt", &ProblemSpec::dt)
        .def_property_readonly("periodic", [](const ProblemSpec& s) { return s.bc == Boundary::Periodic; })
        .def_property_readonly("grid", [](const ProblemSpec& s) { return s.eulerian_grid().nodes(); })
        .def("initial_state", &ProblemSpec::initial_state);

    py::class_<DmdModel>(m, "DmdModel")
        .def_property_readonly("rank", &DmdModel::rank)
        .def_readonly("eigenvalues", &DmdModel::eigenvalues)
        .def_readonly("modes", &DmdModel::modes)
        .def_readonly("amplitudes", &DmdModel::amplitudes)
        .def_readonly("singular_values", &DmdModel::singular_values)
        .def_readonly("training_residual", &DmdModel::training_residual)
        .def_property_readonly("last_training_index", &DmdModel::last_training_index);

    m.def("preset_names", [] {
        std::vector<std::string> out;
        for (Preset p : all_presets()) out.push_back(to_string(p));
        return out;
    });
    m.def("preset_problem", [](const std::string& name, int scale) {
        return preset_problem(preset_from_string(name), scale);
    }, py::arg("name"), py::arg("scale") = 1);
    m.def("preset_training_count", [](const std::string& name, int scale) {
        return preset_training_count(preset_from_string(name), scale);
    }, py::arg("name"), py::arg("scale") = 1);

    m.def("run_eulerian_hfm", [](const ProblemSpec& spec) {
        return run_eulerian_hfm(spec, spec.n_steps).trajectory;
    }, py::arg("spec"), "Eulerian states u^0 .. u^M, one column per time level.");
    m.def("run_lagrangian_hfm", [](const ProblemSpec& spec) {
        const LagrangianRun run = run_lagrangian_hfm(spec, spec.n_steps);
        return py::make_tuple(run.positions, run.values);
    }, py::arg("spec"), "(positions, values), each N x (M + 1).");

    m.def("singular_values", [](const Matrix& x) { return reduced_svd(x).singular_values; }, py::arg("x"));
    m.def("truncation_rank", &truncation_rank, py::arg("singular_values"), py::arg("epsilon"));

    m.def("fit_dmd", [](const Matrix& y, int rank, double epsilon, int first_time_index) {
        return fit_dmd(snapshots(y, first_time_index), selection(rank, epsilon));
    }, py::arg("snapshots"), py::arg("rank") = 0, py::arg("epsilon") = 1e-8, py::arg("first_time_index") = 1,
       "rank > 0 fixes the truncation; otherwise the energy criterion with epsilon.");
    m.def("fit_lagrangian_dmd", [](const Matrix& positions, const Matrix& values, int rank, double epsilon,
                                   int first_time_index) {
        if (positions.rows() != values.rows() || positions.cols() != values.cols())
            throw DimensionMismatch("positions and values differ in shape");
        Matrix stacked(2 * positions.rows(), positions.cols());
        stacked << positions, values;
        return fit_lagrangian_dmd(snapshots(stacked, first_time_index), selection(rank, epsilon));
    }, py::arg("positions"), py::arg("values"), py::arg("rank") = 0, py::arg("epsilon") = 1e-8,
       py::arg("first_time_index") = 1);
    m.def("predict", [](const DmdModel& model, int k) { return predict(model, k); }, py::arg("model"), py::arg("k"));

    m.def("run_experiment", [](const std::string& preset, int scale, std::map<std::string, std::string> options) {
        ExperimentConfig cfg;
        cfg.preset = preset_from_string(preset);
        cfg.scale = scale;
        for (const auto& [key, value] : options) apply_config_value(cfg, key, value);
        RunRecord rec;
        {
            py::gil_scoped_release release;
            rec = run_experiment(cfg);
        }
        py::dict out;
        out["n_cells"] = rec.spec.n_cells;
        out["n_steps"] = rec.spec.n_steps;
        out["m"] = rec.m;
        out["eulerian_hfm_seconds"] = rec.eulerian_hfm_seconds;
        out["reference"] = rec.reference;
        py::list methods;
        for (const auto& r : rec.methods) methods.append(method_dict(r));
        out["methods"] = methods;
        return out;
    }, py::arg("preset"), py::arg("scale") = 1, py::arg("options") = std::map<std::string, std::string>{},
       "Runs a preset; options are config keys (e.g. {'methods': 'lagrangian-dmd', 'output_dir': '...'}).");

    m.def("validate_output", &validate_output, py::arg("dir"));
}
