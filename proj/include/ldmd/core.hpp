#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ldmd/errors.hpp"

namespace ldmd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Boundary { DirichletZero, Periodic };

/// How interpolation treats destination points outside the source hull.
struct Extrapolation {
    enum class Kind { Clamp, Periodic };
    Kind kind = Kind::Clamp;
    double period = 0.0;

    static Extrapolation clamp() { return {}; }
    static Extrapolation periodic(double period) { return {Kind::Periodic, period}; }
};

/// Ordered node coordinates. Strictly increasing by construction.
class Grid1D {
public:
    explicit Grid1D(Vector nodes);

    /// Collocation points for N values on [lo, hi]. Dirichlet grids include
    /// both endpoints; periodic grids drop the duplicate right endpoint.
    static Grid1D uniform(double lo, double hi, int n, Boundary bc);

    int size() const { return static_cast<int>(nodes_.size()); }
    bool is_uniform() const { return uniform_; }
    double operator[](int i) const { return nodes_[i]; }
    const Vector& nodes() const { return nodes_; }
    std::span<const double> span() const { return {nodes_.data(), static_cast<size_t>(nodes_.size())}; }

private:
    Vector nodes_;
    bool uniform_ = false;
};

/// A 1-D advection-diffusion problem u_t + f(u) u_x = (D u_x)_x.
struct ProblemSpec {
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    int n_cells = 2;  // number of grid values N
    int n_steps = 1;  // number of time steps M
    double t_final = 1.0;
    std::function<double(double)> flux_f;  // f = dF/du
    std::function<double(double)> flux_F;
    // D(x, t, u). Left empty when D == 0; the solvers then skip diffusion.
    std::function<double(double, double, double)> diffusion;
    std::function<double(double)> initial_u0;
    Boundary bc = Boundary::DirichletZero;

    double length() const { return domain_hi - domain_lo; }
    double dx() const;
    double dt() const { return t_final / n_steps; }
    double time(int n) const { return n * dt(); }
    bool has_diffusion() const { return static_cast<bool>(diffusion); }

    /// Throws InvalidProblem when a structural invariant is broken.
    void validate() const;

    Grid1D eulerian_grid() const { return Grid1D::uniform(domain_lo, domain_hi, n_cells, bc); }
    Vector initial_state() const;
    Extrapolation extrapolation() const;
};

namespace flux {
/// F(u) = c u, f(u) = c.
void set_linear(ProblemSpec& spec, double speed);
/// F(u) = u^2/2, f(u) = u.
void set_burgers(ProblemSpec& spec);
}  // namespace flux

/// D == d everywhere; d == 0 leaves the diffusion slot empty.
std::function<double(double, double, double)> constant_diffusion(double d);

/// Largest |(F(u+h) - F(u-h))/2h - f(u)| over the samples.
double flux_inconsistency(const ProblemSpec& spec, std::span<const double> samples, double h = 1e-5);
bool flux_is_consistent(const ProblemSpec& spec, std::span<const double> samples, double tol = 1e-6);

/// Solution values tied to a grid at time level n.
struct StateVector {
    Vector values;
    std::shared_ptr<const Grid1D> grid;
    int time_index = 0;

    /// Length matches the grid and all entries are finite.
    void validate() const;
};

/// Column-ordered time series of state (or observable) vectors.
struct SnapshotMatrix {
    Matrix data;
    std::vector<int> col_times;

    int rows() const { return static_cast<int>(data.rows()); }
    int cols() const { return static_cast<int>(data.cols()); }

    /// Checks shape consistency, strictly increasing times (unit stride when
    /// `training`), and that no column is entirely NaN.
    void validate(bool training = true) const;
};

inline std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<size_t>(v.size())}; }

bool strictly_increasing(std::span<const double> v);
inline bool strictly_increasing(const Vector& v) { return strictly_increasing(as_span(v)); }

/// Piecewise-linear interpolant of (src_nodes, src_values) evaluated at dst.
/// Periodic extrapolation wraps coordinates by the period, so the source
/// nodes may live anywhere on the real line as long as they span less than
/// one period.
Vector linear_interpolate(std::span<const double> src_nodes, std::span<const double> src_values,
                          std::span<const double> dst, Extrapolation ext = Extrapolation::clamp());
Vector linear_interpolate(const Grid1D& src, const Vector& src_values, const Grid1D& dst,
                          Extrapolation ext = Extrapolation::clamp());
Vector linear_interpolate(const Vector& src_nodes, const Vector& src_values, const Vector& dst,
                          Extrapolation ext = Extrapolation::clamp());

/// Column k is state k, or the stack [grid_k; state_k] when grids are given.
SnapshotMatrix assemble_snapshots(std::span<const Vector> states, std::span<const Vector> grids = {},
                                  int first_time_index = 1);

/// Splits a stacked [grid; state] matrix at row N.
std::pair<Matrix, Matrix> split_stacked(const Matrix& stacked);

}  // namespace ldmd
