#pragma once

#include "ldmd/core.hpp"
#include "ldmd/tridiagonal.hpp"

namespace ldmd {

/// Local Lax-Friedrichs-type upwind flux at a face:
/// (F(ul) + F(ur))/2 - |a| (ur - ul)/2 with a the secant slope of F
/// (or f(ul) when ul == ur).
double numerical_flux(double u_left, double u_right, const ProblemSpec& spec);

/// Face-centred scratch for one explicit/implicit step.
struct EulerianStepWorkspace {
    Vector flux_faces;   // F_{j+1/2}, N+1 entries, face k sits left of node k
    Vector wave_speeds;  // a_{j+1/2}
    Vector diff_faces;   // D_{j+1/2}
    Tridiagonal tridiag;

    void resize(int n);
};

/// Conservative first-order upwind advection (forward Euler) followed by a
/// backward-Euler centred diffusion solve on a fixed uniform grid.
class EulerianStepper {
public:
    explicit EulerianStepper(const ProblemSpec& spec);

    /// u^n -> u^{n+1}. Throws CflViolation before touching the state.
    Vector advance(const Vector& u, int time_index);

    /// Explicit advection half: u* = u - dt/dx (F_{j+1/2} - F_{j-1/2}).
    Vector advect(const Vector& u, int time_index);

    /// (I - dt D2) at t^{n+1}, D lagged at `u_star`. Identity when D == 0.
    Tridiagonal implicit_system(const Vector& u_star, int time_index) const;

    /// Vectorised scheme residual R(u^{n+1}) = u^{n+1} - u^n + dt D1 F^n - dt D2 u^{n+1}.
    Vector residual(const Vector& u_next, const Vector& u_prev, int time_index);

    /// Max-norm residual of the most recent accepted step.
    double last_residual() const { return last_residual_; }

    const ProblemSpec& spec() const { return spec_; }
    const Grid1D& grid() const { return grid_; }
    const EulerianStepWorkspace& workspace() const { return ws_; }

private:
    void check_cfl(const Vector& u, int time_index) const;

    ProblemSpec spec_;
    Grid1D grid_;
    EulerianStepWorkspace ws_;
    double last_residual_ = 0.0;
};

struct EulerianRun {
    SnapshotMatrix snapshots;  // u^1 .. u^{n_store}
    Matrix trajectory;         // u^0 .. u^M, one column per time level
    double seconds = 0.0;
};

/// Integrates all M steps; keeps the first `n_store` post-initial states as
/// training snapshots. Step failures propagate with their time index.
EulerianRun run_eulerian_hfm(const ProblemSpec& spec, int n_store);

}  // namespace ldmd
