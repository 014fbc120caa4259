#include "ldmd/presets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ldmd {

namespace {
constexpr int kFullCells = 2000;
constexpr int kFullSteps = 1000;
constexpr int kFullSnapshots = 250;
}  // namespace

std::string to_string(Preset p) {
    switch (p) {
        case Preset::Test0Diffusion: return "test0-diffusion";
        case Preset::Test0Advection: return "test0-advection";
        case Preset::Test1: return "test1";
        case Preset::Test2: return "test2";
        case Preset::Test3: return "test3";
        case Preset::Test4: return "test4";
        case Preset::LevelSet: return "levelset";
        case Preset::Custom: return "custom";
    }
    return "custom";
}

Preset preset_from_string(const std::string& name) {
    for (Preset p : all_presets())
        if (to_string(p) == name) return p;
    if (name == "custom") return Preset::Custom;
    throw std::invalid_argument("unknown preset: " + name);
}

const std::vector<Preset>& all_presets() {
    static const std::vector<Preset> presets{Preset::Test0Diffusion, Preset::Test0Advection, Preset::Test1,
                                             Preset::Test2,          Preset::Test3,          Preset::Test4,
                                             Preset::LevelSet};
    return presets;
}

std::string preset_description(Preset p) {
    switch (p) {
        case Preset::Test0Diffusion:
            return "Diffusion-dominated Eulerian demo (f=1e-4, D=1e-2)";
        case Preset::Test0Advection:
            return "Advection-dominated Eulerian demo (f=1, D=1e-3), r in {20, 30}";
        case Preset::Test1: return "Linear advection (f=1, D=0)";
        case Preset::Test2: return "Linear advection-diffusion (f=1, D=0.01)";
        case Preset::Test3: return "Inviscid Burgers (f=u, D=0, periodic)";
        case Preset::Test4: return "Viscous Burgers (f=u, D=0.1, periodic)";
        case Preset::LevelSet: return "Level-set embedding of inviscid Burgers";
        case Preset::Custom: return "Custom configuration";
    }
    return "";
}

double gaussian_pulse(double x) {
    const double z = (x - 0.3) / 0.05;
    return 0.5 * std::exp(-z * z);
}

ProblemSpec preset_problem(Preset p, int scale) {
    if (scale < 1 || kFullCells % scale != 0 || kFullSteps % scale != 0)
        throw std::invalid_argument("scale must divide 1000");
    ProblemSpec spec;
    spec.n_cells = kFullCells / scale;
    spec.n_steps = kFullSteps / scale;
    spec.t_final = 1.0;

    auto pulse_problem = [&](double speed, double d) {
        spec.domain_lo = 0.0;
        spec.domain_hi = 2.0;
        spec.bc = Boundary::DirichletZero;
        flux::set_linear(spec, speed);
        spec.diffusion = constant_diffusion(d);
        spec.initial_u0 = gaussian_pulse;
    };
    auto burgers_problem = [&](double d) {
        spec.domain_lo = 0.0;
        spec.domain_hi = 2.0 * std::numbers::pi;
        spec.bc = Boundary::Periodic;
        flux::set_burgers(spec);
        spec.diffusion = constant_diffusion(d);
        spec.initial_u0 = [](double x) { return 1.0 + std::sin(x); };
    };

    switch (p) {
        case Preset::Test0Diffusion: pulse_problem(1e-4, 1e-2); break;
        case Preset::Test0Advection: pulse_problem(1.0, 1e-3); break;
        case Preset::Test1: pulse_problem(1.0, 0.0); break;
        case Preset::Test2: pulse_problem(1.0, 0.01); break;
        case Preset::Test3: burgers_problem(0.0); break;
        case Preset::Test4: burgers_problem(0.1); break;
        case Preset::LevelSet: burgers_problem(0.0); break;
        case Preset::Custom: throw std::invalid_argument("custom preset has no built-in problem");
    }
    return spec;
}

int preset_training_count(Preset, int scale) {
    if (scale < 1 || kFullSnapshots % scale != 0) throw std::invalid_argument("scale must divide 250");
    return kFullSnapshots / scale;
}

double preset_epsilon(Preset p) {
    return p == Preset::Test0Diffusion || p == Preset::Test0Advection ? 1e-4 : 1e-8;
}

std::vector<int> preset_fixed_ranks(Preset p) {
    if (p == Preset::Test0Diffusion) return {20};
    if (p == Preset::Test0Advection) return {20, 30};
    return {};
}

}  // namespace ldmd
