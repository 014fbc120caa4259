#pragma once

#include <functional>
#include <iosfwd>

#include "ldmd/core.hpp"
#include "ldmd/dmd.hpp"

namespace ldmd {

/// c(x, y, t) sampled on an N_y x N_x tensor grid; row i is the line y = y_i.
struct LevelSetField {
    Grid1D x_grid;
    Grid1D y_grid;
    Matrix values;
    int time_index = 0;

    int nx() const { return x_grid.size(); }
    int ny() const { return y_grid.size(); }
};

/// Uniform y grid of `ny` nodes over [min u0 - margin, max u0 + margin] with
/// margin = margin_fraction * range (or of max(1, |u0|) for a constant u0).
Grid1D levelset_y_grid(const ProblemSpec& spec, int ny, double margin_fraction = 0.1);

/// Default y resolution: N_x / 10, at least 3.
int default_levelset_ny(int nx);

/// c0(x, y) = y - u0(x). Throws RangeNotCovered unless the y grid covers
/// the range of u0 on the x grid plus a 10% margin.
LevelSetField embed_initial(const std::function<double(double)>& u0, const Grid1D& x_grid, const Grid1D& y_grid);

/// One upwind step of c_t + f(y) c_x = 0, each row at its own constant speed.
/// Periodic problems wrap in x; Dirichlet problems copy the inflow value.
/// Throws CflViolation when dt |f(y_i)| / dx exceeds one on any row.
LevelSetField advance_levelset(const LevelSetField& field, const ProblemSpec& spec, double dt);

/// Root in y of each column: the unique sign change is located and the root
/// interpolated linearly. Throws NoSignChange or MultipleSignChanges.
StateVector extract_zero_contour(const LevelSetField& field);

/// Column-major flattening of an N_y x N_x block and its inverse.
Vector flatten_field(const Matrix& block);
Matrix unflatten_field(const Vector& flat, int ny, int nx);

/// Lagrangian form of the embedded problem: every row moves rigidly at
/// speed f(y_i), so positions are x_j + t f(y_i) and values stay frozen.
/// Observables are [vec(X); vec(c)].
struct LevelSetRun {
    SnapshotMatrix observables;  // times 1 .. n_store
    Matrix contours;             // N_x x (M + 1), zero contour per time level
    Grid1D x_grid;
    Grid1D y_grid;
    double seconds = 0.0;
};

LevelSetRun run_levelset_lagrangian(const ProblemSpec& spec, int ny, int n_store);

/// [vec(X^n); vec(c0)] with X^n_ij = x_j + n dt f(y_i).
Vector levelset_lagrangian_observable(const LevelSetField& initial, const ProblemSpec& spec, int n);

/// Same problem on the fixed tensor grid with advance_levelset; observables
/// are vec(c).
LevelSetRun run_levelset_eulerian(const ProblemSpec& spec, int ny, int n_store);

/// Eulerian field carried by a Lagrangian observable: each row of c is
/// interpolated from its moving positions back onto the x grid.
LevelSetField field_from_observable(const Vector& observable, const Grid1D& x_grid, const Grid1D& y_grid,
                                    Extrapolation ext, int time_index = 0);

/// fit_dmd on level-set observables.
DmdModel levelset_dmd(const SnapshotMatrix& observables, RankSelection rank);

/// Predicted zero contour at time index k.
Vector predict_contour(const DmdModel& model, int k, const Grid1D& x_grid, const Grid1D& y_grid, Extrapolation ext);

/// Field snapshot CSV: a "# nx=..,ny=.." line, then the snapshot layout with
/// one flattened field per row.
void write_field_csv(std::ostream& out, const Matrix& flattened_columns, const std::vector<double>& times, int nx,
                     int ny);

}  // namespace ldmd
