#pragma once

#include <string>
#include <vector>

#include "ldmd/core.hpp"
#include "ldmd/svd.hpp"

namespace ldmd {

enum class Frame { Eulerian, Lagrangian };

std::string to_string(Frame frame);

/// Orthonormal reduced basis; rows are N (Eulerian) or 2N (stacked [x; u]).
struct PodBasis {
    Matrix basis;
    Frame frame = Frame::Eulerian;
    Vector singular_values;  // full spectrum of the training matrix

    int rank() const { return static_cast<int>(basis.cols()); }
    int rows() const { return static_cast<int>(basis.rows()); }
    Vector project(const Vector& z) const { return basis.transpose() * z; }
    Vector lift(const Vector& z_hat) const { return basis * z_hat; }
};

/// Leading left singular vectors of the snapshot matrix.
PodBasis fit_pod(const SnapshotMatrix& y, RankSelection rank, Frame frame);

struct NewtonOptions {
    double tolerance = 1e-10;  // on ||Phi^T R||_2, scaled by max(1, ||z||)
    int max_iterations = 50;
    double fd_step = 1e-7;
};

struct NewtonReport {
    int iterations = 0;
    double residual = 0.0;
};

/// One Galerkin step of the Eulerian scheme. The advection half is explicit,
/// so the projected residual Phi^T ((I - dt D2) Phi u_hat - u*) is affine in
/// u_hat and its Jacobian is assembled exactly.
Vector pod_step_eulerian(const PodBasis& basis, const Vector& u_hat, const ProblemSpec& spec, int time_index,
                         const NewtonOptions& options = {}, NewtonReport* report = nullptr);

/// One Galerkin step of the semi-Lagrangian scheme on stacked [x; u]. The
/// diffused target values come from the interpolate/diffuse/interpolate
/// pipeline applied to the reconstructed state at t^n; the trapezoidal
/// position update couples x and u, and its flux term is differentiated by
/// forward differences in the reduced coordinates.
Vector pod_step_lagrangian(const PodBasis& basis, const Vector& z_hat, const ProblemSpec& spec, int time_index,
                           const NewtonOptions& options = {}, NewtonReport* report = nullptr);

struct PodRun {
    SnapshotMatrix trajectory;    // reconstructed full states, times 0 .. horizon
    Matrix reduced;               // reduced coordinates, one column per time
    std::vector<int> iterations;  // Newton iterations per step
    double seconds = 0.0;
};

/// Projects the initial state, steps to `horizon` and lifts every level.
/// For the Lagrangian frame `initial` is the stacked [x^0; u^0].
PodRun run_pod_rom(const PodBasis& basis, const Vector& initial, const ProblemSpec& spec, int horizon,
                   const NewtonOptions& options = {});

}  // namespace ldmd
