#include "ldmd/hfm_eulerian.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace ldmd {

namespace {

double face_flux(double ul, double ur, const ProblemSpec& spec, double& speed) {
    const double fl = spec.flux_F(ul);
    const double fr = spec.flux_F(ur);
    speed = ur != ul ? (fr - fl) / (ur - ul) : spec.flux_f(ul);
    return 0.5 * (fr + fl) - 0.5 * std::abs(speed) * (ur - ul);
}

}  // namespace

double numerical_flux(double ul, double ur, const ProblemSpec& spec) {
    double speed = 0.0;
    return face_flux(ul, ur, spec, speed);
}

void EulerianStepWorkspace::resize(int n) {
    flux_faces.setZero(n + 1);
    wave_speeds.setZero(n + 1);
    diff_faces.setZero(n + 1);
}

EulerianStepper::EulerianStepper(const ProblemSpec& spec) : spec_(spec), grid_((spec.validate(), spec.eulerian_grid())) {
    ws_.resize(spec_.n_cells);
}

void EulerianStepper::check_cfl(const Vector& u, int n) const {
    double max_speed = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) max_speed = std::max(max_speed, std::abs(spec_.flux_f(u[j])));
    const double courant = spec_.dt() * max_speed / spec_.dx();
    if (!(courant <= 1.0 + 1e-12))
        throw CflViolation("CFL violated at time index " + std::to_string(n) + ": Courant number " +
                               std::to_string(courant),
                           max_speed, n);
}

Vector EulerianStepper::advect(const Vector& u, int n) {
    const int N = spec_.n_cells;
    if (u.size() != N) throw DimensionMismatch("state length differs from n_cells");
    check_cfl(u, n);

    const bool periodic = spec_.bc == Boundary::Periodic;
    auto value = [&](int j) -> double {
        if (j < 0) return periodic ? u[j + N] : 0.0;
        if (j >= N) return periodic ? u[j - N] : 0.0;
        return u[j];
    };
    for (int k = 0; k <= N; ++k) {
        ws_.flux_faces[k] = face_flux(value(k - 1), value(k), spec_, ws_.wave_speeds[k]);
    }
    if (periodic) ws_.flux_faces[N] = ws_.flux_faces[0];

    const double ratio = spec_.dt() / spec_.dx();
    Vector u_star(N);
    for (int j = 0; j < N; ++j) u_star[j] = u[j] - ratio * (ws_.flux_faces[j + 1] - ws_.flux_faces[j]);
    return u_star;
}

Tridiagonal EulerianStepper::implicit_system(const Vector& u_star, int n) const {
    const int N = spec_.n_cells;
    if (!spec_.has_diffusion())
        return Tridiagonal{Vector::Zero(N), Vector::Ones(N), Vector::Zero(N), spec_.bc == Boundary::Periodic};
    return implicit_diffusion_matrix(spec_, grid_, u_star, spec_.time(n + 1));
}

Vector EulerianStepper::advance(const Vector& u, int n) {
    Vector u_star = advect(u, n);
    if (!spec_.has_diffusion()) {
        last_residual_ = 0.0;
        return u_star;
    }
    ws_.tridiag = implicit_system(u_star, n);
    const int N = spec_.n_cells;
    const double r = spec_.dt() / (spec_.dx() * spec_.dx());
    for (int k = 0; k < N; ++k) ws_.diff_faces[k] = -ws_.tridiag.lower[k] / r;
    ws_.diff_faces[N] = -ws_.tridiag.upper[N - 1] / r;

    Vector next = solve_tridiagonal(ws_.tridiag, u_star);
    last_residual_ = (ws_.tridiag.apply(next) - u_star).lpNorm<Eigen::Infinity>();
    if (!(last_residual_ <= 1e-10) || !next.allFinite())
        throw NumericalFailure("implicit diffusion residual " + std::to_string(last_residual_) + " at time index " +
                               std::to_string(n));
    return next;
}

Vector EulerianStepper::residual(const Vector& u_next, const Vector& u_prev, int n) {
    const Vector u_star = advect(u_prev, n);
    return implicit_system(u_star, n).apply(u_next) - u_star;
}

EulerianRun run_eulerian_hfm(const ProblemSpec& spec, int n_store) {
    spec.validate();
    if (n_store < 0 || n_store > spec.n_steps)
        throw InvalidProblem("n_store must lie in [0, M]");
    const auto start = std::chrono::steady_clock::now();

    EulerianStepper stepper(spec);
    EulerianRun run;
    run.trajectory.resize(spec.n_cells, spec.n_steps + 1);
    Vector u = spec.initial_state();
    run.trajectory.col(0) = u;
    for (int n = 0; n < spec.n_steps; ++n) {
        u = stepper.advance(u, n);
        run.trajectory.col(n + 1) = u;
    }
    run.snapshots.data = run.trajectory.middleCols(1, n_store);
    for (int k = 1; k <= n_store; ++k) run.snapshots.col_times.push_back(k);

    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace ldmd
