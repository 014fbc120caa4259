#pragma once

#include <cmath>

#include "ldmd/core.hpp"
#include "ldmd/presets.hpp"

namespace ldmd::testing {

// Small problem builders shared by the unit and property tests.
inline ProblemSpec linear_problem(int n, int m, double speed, double d, Boundary bc, double t_final = 1.0,
                                  double lo = 0.0, double hi = 2.0) {
    ProblemSpec spec;
    spec.domain_lo = lo;
    spec.domain_hi = hi;
    spec.n_cells = n;
    spec.n_steps = m;
    spec.t_final = t_final;
    spec.bc = bc;
    flux::set_linear(spec, speed);
    spec.diffusion = constant_diffusion(d);
    spec.initial_u0 = gaussian_pulse;
    return spec;
}

inline ProblemSpec burgers_problem(int n, int m, double d, double t_final = 1.0) {
    ProblemSpec spec;
    spec.domain_lo = 0.0;
    spec.domain_hi = 2.0 * M_PI;
    spec.n_cells = n;
    spec.n_steps = m;
    spec.t_final = t_final;
    spec.bc = Boundary::Periodic;
    flux::set_burgers(spec);
    spec.diffusion = constant_diffusion(d);
    spec.initial_u0 = [](double x) { return 1.0 + std::sin(x); };
    return spec;
}

inline double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ldmd::testing
