#pragma once

#include "ldmd/core.hpp"

namespace ldmd {

/// Particle positions x^n and the values u^n they carry.
struct LagrangianState {
    Vector positions;
    Vector values;
    int time_index = 0;
};

struct LagrangianOptions {
    // Run the interpolate/diffuse/interpolate pipeline even when D == 0.
    // Only useful for measuring interpolation diffusion.
    bool force_interpolation = false;
};

/// Semi-Lagrangian stepper. Values diffuse on the fixed Eulerian grid through
/// an interpolation round trip; positions follow the characteristics with the
/// trapezoidal rule. Positions are never wrapped: periodic problems keep a
/// lifted, strictly increasing grid and wrap only inside interpolation.
class LagrangianStepper {
public:
    explicit LagrangianStepper(const ProblemSpec& spec, LagrangianOptions options = {});

    LagrangianState advance(const LagrangianState& state) const;

    /// u^{n+1} carried by the particles at x^n.
    Vector diffuse_values(const Vector& positions, const Vector& values, int time_index) const;

    /// x^n + dt/2 (f(u^n) + f(u^{n+1})).
    Vector advance_positions(const Vector& positions, const Vector& values, const Vector& next_values) const;

    /// Throws GridEntanglement unless the positions form an untangled grid.
    void check_untangled(const Vector& positions, int time_index) const;
    bool untangled(const Vector& positions) const;

    bool skips_diffusion() const { return !spec_.has_diffusion() && !options_.force_interpolation; }
    const ProblemSpec& spec() const { return spec_; }
    const Grid1D& eulerian_grid() const { return grid_; }
    LagrangianState initial_state() const;

private:
    ProblemSpec spec_;
    LagrangianOptions options_;
    Grid1D grid_;
};

struct LagrangianRun {
    SnapshotMatrix stacked;  // [x^k; u^k], k = 1 .. n_store
    Matrix positions;        // x^0 .. x^M
    Matrix values;           // u^0 .. u^M
    double seconds = 0.0;
};

LagrangianRun run_lagrangian_hfm(const ProblemSpec& spec, int n_store, LagrangianOptions options = {});

}  // namespace ldmd
