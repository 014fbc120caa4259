#include "ldmd/hfm_lagrangian.hpp"

#include <chrono>
#include <string>

#include "ldmd/tridiagonal.hpp"

namespace ldmd {

LagrangianStepper::LagrangianStepper(const ProblemSpec& spec, LagrangianOptions options)
    : spec_(spec), options_(options), grid_((spec.validate(), spec.eulerian_grid())) {}

LagrangianState LagrangianStepper::initial_state() const {
    return {grid_.nodes(), spec_.initial_state(), 0};
}

bool LagrangianStepper::untangled(const Vector& x) const {
    if (!x.allFinite() || !strictly_increasing(x)) return false;
    if (spec_.bc == Boundary::Periodic && !(x[x.size() - 1] - x[0] < spec_.length())) return false;
    return true;
}

void LagrangianStepper::check_untangled(const Vector& x, int n) const {
    if (!untangled(x))
        throw GridEntanglement("Lagrangian grid entangled at time index " + std::to_string(n), n);
}

Vector LagrangianStepper::diffuse_values(const Vector& x, const Vector& u, int n) const {
    if (skips_diffusion()) return u;
    const Extrapolation ext = spec_.extrapolation();
    const Vector on_grid = linear_interpolate(x, u, grid_.nodes(), ext);
    Vector diffused = on_grid;
    if (spec_.has_diffusion()) {
        const double t_next = spec_.time(n + 1);
        const Tridiagonal sys = implicit_diffusion_matrix(spec_, grid_, on_grid, t_next);
        diffused = solve_tridiagonal(sys, on_grid);
        const double res = (sys.apply(diffused) - on_grid).lpNorm<Eigen::Infinity>();
        if (!(res <= 1e-10))
            throw NumericalFailure("Lagrangian diffusion residual " + std::to_string(res) + " at time index " +
                                   std::to_string(n));
    }
    return linear_interpolate(grid_.nodes(), diffused, x, ext);
}

Vector LagrangianStepper::advance_positions(const Vector& x, const Vector& u, const Vector& u_next) const {
    Vector out(x.size());
    const double half_dt = 0.5 * spec_.dt();
    for (Eigen::Index j = 0; j < x.size(); ++j) out[j] = x[j] + half_dt * (spec_.flux_f(u[j]) + spec_.flux_f(u_next[j]));
    return out;
}

LagrangianState LagrangianStepper::advance(const LagrangianState& s) const {
    if (s.positions.size() != s.values.size() || s.values.size() != grid_.size())
        throw DimensionMismatch("Lagrangian state sizes differ from the grid");
    check_untangled(s.positions, s.time_index);
    LagrangianState next;
    next.values = diffuse_values(s.positions, s.values, s.time_index);
    next.positions = advance_positions(s.positions, s.values, next.values);
    next.time_index = s.time_index + 1;
    check_untangled(next.positions, next.time_index);
    return next;
}

LagrangianRun run_lagrangian_hfm(const ProblemSpec& spec, int n_store, LagrangianOptions options) {
    spec.validate();
    if (n_store < 0 || n_store > spec.n_steps)
        throw InvalidProblem("n_store must lie in [0, M]");
    const auto start = std::chrono::steady_clock::now();

    const LagrangianStepper stepper(spec, options);
    LagrangianRun run;
    const int n = spec.n_cells;
    run.positions.resize(n, spec.n_steps + 1);
    run.values.resize(n, spec.n_steps + 1);
    LagrangianState s = stepper.initial_state();
    run.positions.col(0) = s.positions;
    run.values.col(0) = s.values;
    for (int k = 0; k < spec.n_steps; ++k) {
        s = stepper.advance(s);
        run.positions.col(k + 1) = s.positions;
        run.values.col(k + 1) = s.values;
    }
    run.stacked.data.resize(2 * n, n_store);
    run.stacked.data.topRows(n) = run.positions.middleCols(1, n_store);
    run.stacked.data.bottomRows(n) = run.values.middleCols(1, n_store);
    for (int k = 1; k <= n_store; ++k) run.stacked.col_times.push_back(k);

    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace ldmd
