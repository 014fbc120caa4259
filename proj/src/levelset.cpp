#include "ldmd/levelset.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "ldmd/csv.hpp"

namespace ldmd {

int default_levelset_ny(int nx) { return std::max(3, nx / 10); }

Grid1D levelset_y_grid(const ProblemSpec& spec, int ny, double margin_fraction) {
    if (ny < 2) throw InvalidProblem("level-set y grid needs at least two nodes");
    const Vector u0 = spec.initial_state();
    const double lo = u0.minCoeff(), hi = u0.maxCoeff();
    const double range = hi - lo;
    const double margin = margin_fraction * (range > 0.0 ? range : std::max(1.0, std::abs(lo)));
    return Grid1D::uniform(lo - margin, hi + margin, ny, Boundary::DirichletZero);
}

LevelSetField embed_initial(const std::function<double(double)>& u0, const Grid1D& x_grid, const Grid1D& y_grid) {
    Vector u(x_grid.size());
    for (int j = 0; j < x_grid.size(); ++j) u[j] = u0(x_grid[j]);
    const double lo = u.minCoeff(), hi = u.maxCoeff();
    const double margin = 0.1 * (hi - lo);
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (y_grid[0] > lo - margin + slack || y_grid[y_grid.size() - 1] < hi + margin - slack)
        throw RangeNotCovered("y grid [" + std::to_string(y_grid[0]) + ", " +
                              std::to_string(y_grid[y_grid.size() - 1]) + "] does not cover the range of u0 [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "] with a 10% margin");
    LevelSetField field{x_grid, y_grid, Matrix(y_grid.size(), x_grid.size()), 0};
    for (int i = 0; i < y_grid.size(); ++i)
        for (int j = 0; j < x_grid.size(); ++j) field.values(i, j) = y_grid[i] - u[j];
    return field;
}

LevelSetField advance_levelset(const LevelSetField& field, const ProblemSpec& spec, double dt) {
    if (field.nx() != spec.n_cells) throw DimensionMismatch("level-set x grid differs from the problem grid");
    const double dx = spec.dx();
    const bool periodic = spec.bc == Boundary::Periodic;
    const int nx = field.nx();
    LevelSetField next = field;
    next.time_index = field.time_index + 1;
    for (int i = 0; i < field.ny(); ++i) {
        const double a = spec.flux_f(field.y_grid[i]);
        const double nu = a * dt / dx;
        if (!(std::abs(nu) <= 1.0 + 1e-12))
            throw CflViolation("level-set row " + std::to_string(i) + " Courant number " + std::to_string(nu),
                               std::abs(a), field.time_index);
        if (nu == 0.0) continue;
        const auto c = field.values.row(i);
        auto out = next.values.row(i);
        for (int j = 0; j < nx; ++j) {
            if (nu > 0.0) {
                const double left = j > 0 ? c[j - 1] : (periodic ? c[nx - 1] : c[0]);
                out[j] = c[j] - nu * (c[j] - left);
            } else {
                const double right = j + 1 < nx ? c[j + 1] : (periodic ? c[0] : c[nx - 1]);
                out[j] = c[j] - nu * (right - c[j]);
            }
        }
    }
    return next;
}

StateVector extract_zero_contour(const LevelSetField& field) {
    StateVector out;
    out.values.resize(field.nx());
    out.grid = std::make_shared<const Grid1D>(field.x_grid);
    out.time_index = field.time_index;
    for (int j = 0; j < field.nx(); ++j) {
        const auto c = field.values.col(j);
        int crossings = 0;
        double root = 0.0;
        for (int i = 0; i + 1 < field.ny(); ++i) {
            const double a = c[i], b = c[i + 1];
            if ((a > 0.0) == (b > 0.0)) continue;
            ++crossings;
            root = field.y_grid[i] + (field.y_grid[i + 1] - field.y_grid[i]) * (a / (a - b));
        }
        if (crossings == 0)
            throw NoSignChange("level-set column " + std::to_string(j) + " has no sign change at time index " +
                               std::to_string(field.time_index));
        if (crossings > 1)
            throw MultipleSignChanges("level-set column " + std::to_string(j) + " has " + std::to_string(crossings) +
                                      " sign changes at time index " + std::to_string(field.time_index));
        out.values[j] = root;
    }
    return out;
}

Vector flatten_field(const Matrix& block) { return Eigen::Map<const Vector>(block.data(), block.size()); }

Matrix unflatten_field(const Vector& flat, int ny, int nx) {
    if (flat.size() != static_cast<Eigen::Index>(ny) * nx) throw DimensionMismatch("flattened field size mismatch");
    return Eigen::Map<const Matrix>(flat.data(), ny, nx);
}

LevelSetField field_from_observable(const Vector& observable, const Grid1D& x_grid, const Grid1D& y_grid,
                                    Extrapolation ext, int time_index) {
    const int nx = x_grid.size(), ny = y_grid.size();
    const Eigen::Index block = static_cast<Eigen::Index>(nx) * ny;
    if (observable.size() != 2 * block) throw DimensionMismatch("level-set observable must hold two N_y x N_x blocks");
    const Matrix x = unflatten_field(observable.head(block), ny, nx);
    const Matrix c = unflatten_field(observable.tail(block), ny, nx);
    LevelSetField field{x_grid, y_grid, Matrix(ny, nx), time_index};
    for (int i = 0; i < ny; ++i) {
        const Vector xr = x.row(i).transpose();
        const Vector cr = c.row(i).transpose();
        bool ok = xr.allFinite() && strictly_increasing(xr);
        if (ok && ext.kind == Extrapolation::Kind::Periodic) ok = xr[nx - 1] - xr[0] < ext.period;
        if (!ok) throw GridEntanglement("level-set row " + std::to_string(i) + " positions are entangled", time_index);
        field.values.row(i) = linear_interpolate(xr, cr, x_grid.nodes(), ext).transpose();
    }
    return field;
}

namespace {

Vector stack(const Matrix& x, const Matrix& c) {
    Vector y(x.size() + c.size());
    y << flatten_field(x), flatten_field(c);
    return y;
}

}  // namespace

Vector levelset_lagrangian_observable(const LevelSetField& initial, const ProblemSpec& spec, int n) {
    const int ny = initial.ny(), nx = initial.nx();
    const double t = spec.time(n);
    Matrix x(ny, nx);
    for (int i = 0; i < ny; ++i) {
        const double shift = t * spec.flux_f(initial.y_grid[i]);
        for (int j = 0; j < nx; ++j) x(i, j) = initial.x_grid[j] + shift;
    }
    return stack(x, initial.values);
}

LevelSetRun run_levelset_lagrangian(const ProblemSpec& spec, int ny, int n_store) {
    spec.validate();
    if (n_store < 0 || n_store > spec.n_steps) throw InvalidProblem("n_store must lie in [0, M]");
    const auto start = std::chrono::steady_clock::now();
    const Grid1D xg = spec.eulerian_grid();
    const Grid1D yg = levelset_y_grid(spec, ny);
    const LevelSetField initial = embed_initial(spec.initial_u0, xg, yg);
    const Extrapolation ext = spec.extrapolation();

    LevelSetRun run{SnapshotMatrix{Matrix(2 * initial.values.size(), n_store), {}},
                    Matrix(xg.size(), spec.n_steps + 1), xg, yg, 0.0};
    run.contours.col(0) = extract_zero_contour(initial).values;
    for (int n = 1; n <= spec.n_steps; ++n) {
        const Vector y = levelset_lagrangian_observable(initial, spec, n);
        if (n <= n_store) {
            run.observables.data.col(n - 1) = y;
            run.observables.col_times.push_back(n);
        }
        run.contours.col(n) = extract_zero_contour(field_from_observable(y, xg, yg, ext, n)).values;
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

LevelSetRun run_levelset_eulerian(const ProblemSpec& spec, int ny, int n_store) {
    spec.validate();
    if (n_store < 0 || n_store > spec.n_steps) throw InvalidProblem("n_store must lie in [0, M]");
    const auto start = std::chrono::steady_clock::now();
    const Grid1D xg = spec.eulerian_grid();
    const Grid1D yg = levelset_y_grid(spec, ny);
    LevelSetField field = embed_initial(spec.initial_u0, xg, yg);

    LevelSetRun run{SnapshotMatrix{Matrix(field.values.size(), n_store), {}},
                    Matrix(xg.size(), spec.n_steps + 1), xg, yg, 0.0};
    run.contours.col(0) = extract_zero_contour(field).values;
    for (int n = 1; n <= spec.n_steps; ++n) {
        field = advance_levelset(field, spec, spec.dt());
        if (n <= n_store) {
            run.observables.data.col(n - 1) = flatten_field(field.values);
            run.observables.col_times.push_back(n);
        }
        run.contours.col(n) = extract_zero_contour(field).values;
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

DmdModel levelset_dmd(const SnapshotMatrix& observables, RankSelection rank) {
    return fit_dmd(observables, rank, ObservableKind::LevelSetField);
}

Vector predict_contour(const DmdModel& model, int k, const Grid1D& x_grid, const Grid1D& y_grid, Extrapolation ext) {
    return extract_zero_contour(field_from_observable(predict(model, k), x_grid, y_grid, ext, k)).values;
}

void write_field_csv(std::ostream& out, const Matrix& flattened_columns, const std::vector<double>& times, int nx,
                     int ny) {
    out << "# nx=" << nx << ",ny=" << ny << '\n';
    csv::write_time_rows(out, flattened_columns, times, "c");
}

}  // namespace ldmd
