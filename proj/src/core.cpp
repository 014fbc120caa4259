#include "ldmd/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ldmd {

Grid1D::Grid1D(Vector nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 1)
        throw NonMonotonicGrid("grid must have at least one node");
    if (!strictly_increasing(nodes_))
        throw NonMonotonicGrid("grid nodes are not strictly increasing");
    uniform_ = true;
    if (nodes_.size() > 2) {
        const double h0 = nodes_[1] - nodes_[0];
        for (Eigen::Index i = 2; i < nodes_.size(); ++i) {
            const double h = nodes_[i] - nodes_[i - 1];
            if (std::abs(h - h0) > 1e-12 * std::abs(h0) + 4 * std::numeric_limits<double>::epsilon() *
                                                                 std::max(std::abs(nodes_[i]), 1.0)) {
                uniform_ = false;
                break;
            }
        }
    }
}

Grid1D Grid1D::uniform(double lo, double hi, int n, Boundary bc) {
    if (n < 2 || !(hi > lo))
        throw InvalidProblem("uniform grid needs n >= 2 and hi > lo");
    const double h = bc == Boundary::Periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
    Vector x(n);
    for (int j = 0; j < n; ++j) x[j] = lo + j * h;
    if (bc == Boundary::DirichletZero) x[n - 1] = hi;
    return Grid1D(std::move(x));
}

double ProblemSpec::dx() const {
    return bc == Boundary::Periodic ? length() / n_cells : length() / (n_cells - 1);
}

void ProblemSpec::validate() const {
    if (n_cells < 2) throw InvalidProblem("n_cells must be >= 2");
    if (n_steps < 1) throw InvalidProblem("n_steps must be >= 1");
    if (!(t_final > 0)) throw InvalidProblem("t_final must be positive");
    if (!(domain_hi > domain_lo)) throw InvalidProblem("domain_hi must exceed domain_lo");
    if (!flux_f || !flux_F) throw InvalidProblem("flux functions f and F are required");
    if (!initial_u0) throw InvalidProblem("initial condition is required");
}

Vector ProblemSpec::initial_state() const {
    const Grid1D g = eulerian_grid();
    Vector u(g.size());
    for (int j = 0; j < g.size(); ++j) u[j] = initial_u0(g[j]);
    return u;
}

Extrapolation ProblemSpec::extrapolation() const {
    return bc == Boundary::Periodic ? Extrapolation::periodic(length()) : Extrapolation::clamp();
}

namespace flux {
void set_linear(ProblemSpec& spec, double speed) {
    spec.flux_f = [speed](double) { return speed; };
    spec.flux_F = [speed](double u) { return speed * u; };
}

void set_burgers(ProblemSpec& spec) {
    spec.flux_f = [](double u) { return u; };
    spec.flux_F = [](double u) { return 0.5 * u * u; };
}
}  // namespace flux

std::function<double(double, double, double)> constant_diffusion(double d) {
    if (d == 0.0) return {};
    return [d](double, double, double) { return d; };
}

double flux_inconsistency(const ProblemSpec& spec, std::span<const double> samples, double h) {
    double worst = 0.0;
    for (double u : samples) {
        const double fd = (spec.flux_F(u + h) - spec.flux_F(u - h)) / (2 * h);
        worst = std::max(worst, std::abs(fd - spec.flux_f(u)));
    }
    return worst;
}

bool flux_is_consistent(const ProblemSpec& spec, std::span<const double> samples, double tol) {
    return flux_inconsistency(spec, samples) <= tol;
}

void StateVector::validate() const {
    if (grid && grid->size() != values.size())
        throw DimensionMismatch("state length does not match its grid");
    if (!values.allFinite())
        throw NumericalFailure("state at time index " + std::to_string(time_index) + " has non-finite entries");
}

void SnapshotMatrix::validate(bool training) const {
    if (static_cast<Eigen::Index>(col_times.size()) != data.cols())
        throw DimensionMismatch("col_times length does not match column count");
    for (size_t k = 1; k < col_times.size(); ++k) {
        const int step = col_times[k] - col_times[k - 1];
        if (step <= 0 || (training && step != 1))
            throw DimensionMismatch("snapshot times must be strictly increasing with unit stride");
    }
    for (Eigen::Index k = 0; k < data.cols(); ++k) {
        if (data.rows() > 0 && data.col(k).array().isNaN().all())
            throw NumericalFailure("snapshot column " + std::to_string(k) + " is all NaN");
    }
}

bool strictly_increasing(std::span<const double> v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

namespace {

double lerp_at(double x0, double x1, double v0, double v1, double x) {
    const double w = (x - x0) / (x1 - x0);
    return v0 + w * (v1 - v0);
}

}  // namespace

Vector linear_interpolate(std::span<const double> src, std::span<const double> vals, std::span<const double> dst,
                          Extrapolation ext) {
    if (src.size() != vals.size())
        throw DimensionMismatch("interpolation nodes and values differ in length");
    if (src.empty()) throw DimensionMismatch("interpolation source is empty");
    if (!strictly_increasing(src))
        throw NonMonotonicGrid("interpolation source grid is not strictly increasing");

    const size_t n = src.size();
    Vector out(static_cast<Eigen::Index>(dst.size()));

    if (ext.kind == Extrapolation::Kind::Periodic) {
        const double period = ext.period;
        if (!(period > 0)) throw InvalidProblem("periodic interpolation needs a positive period");
        if (!(src[n - 1] - src[0] < period))
            throw NonMonotonicGrid("periodic source grid spans a full period or more");
        const double s0 = src[0];
        for (size_t i = 0; i < dst.size(); ++i) {
            double q = s0 + std::fmod(dst[i] - s0, period);
            if (q < s0) q += period;
            if (q >= s0 + period) q -= period;
            const auto it = std::upper_bound(src.begin(), src.end(), q);
            const size_t k = static_cast<size_t>(it - src.begin()) - 1;
            if (k + 1 < n)
                out[i] = lerp_at(src[k], src[k + 1], vals[k], vals[k + 1], q);
            else
                out[i] = lerp_at(src[n - 1], s0 + period, vals[n - 1], vals[0], q);
        }
        return out;
    }

    for (size_t i = 0; i < dst.size(); ++i) {
        const double q = dst[i];
        if (q <= src[0]) {
            out[i] = vals[0];
        } else if (q >= src[n - 1]) {
            out[i] = vals[n - 1];
        } else {
            const auto it = std::upper_bound(src.begin(), src.end(), q);
            const size_t k = static_cast<size_t>(it - src.begin()) - 1;
            out[i] = lerp_at(src[k], src[k + 1], vals[k], vals[k + 1], q);
        }
    }
    return out;
}

Vector linear_interpolate(const Grid1D& src, const Vector& src_values, const Grid1D& dst, Extrapolation ext) {
    return linear_interpolate(src.span(), as_span(src_values), dst.span(), ext);
}

Vector linear_interpolate(const Vector& src_nodes, const Vector& src_values, const Vector& dst, Extrapolation ext) {
    return linear_interpolate(as_span(src_nodes), as_span(src_values), as_span(dst), ext);
}

SnapshotMatrix assemble_snapshots(std::span<const Vector> states, std::span<const Vector> grids,
                                  int first_time_index) {
    SnapshotMatrix out;
    if (states.empty()) return out;
    const Eigen::Index n = states.front().size();
    for (const auto& s : states)
        if (s.size() != n) throw DimensionMismatch("ragged state sequence");
    const bool stacked = !grids.empty();
    if (stacked) {
        if (grids.size() != states.size())
            throw DimensionMismatch("grid count differs from state count");
        for (const auto& g : grids)
            if (g.size() != n) throw DimensionMismatch("grid length differs from state length");
    }
    out.data.resize(stacked ? 2 * n : n, static_cast<Eigen::Index>(states.size()));
    for (size_t k = 0; k < states.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        if (stacked) {
            out.data.col(col).head(n) = grids[k];
            out.data.col(col).tail(n) = states[k];
        } else {
            out.data.col(col) = states[k];
        }
        out.col_times.push_back(first_time_index + static_cast<int>(k));
    }
    return out;
}

std::pair<Matrix, Matrix> split_stacked(const Matrix& stacked) {
    if (stacked.rows() % 2 != 0)
        throw DimensionMismatch("stacked matrix must have an even number of rows");
    const Eigen::Index n = stacked.rows() / 2;
    return {stacked.topRows(n), stacked.bottomRows(n)};
}

}  // namespace ldmd
