#include "ldmd/pod.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <string>

#include "ldmd/hfm_eulerian.hpp"
#include "ldmd/hfm_lagrangian.hpp"
#include "ldmd/tridiagonal.hpp"

namespace ldmd {

std::string to_string(Frame frame) { return frame == Frame::Eulerian ? "eulerian" : "lagrangian"; }

PodBasis fit_pod(const SnapshotMatrix& y, RankSelection rank, Frame frame) {
    y.validate(false);
    if (!y.data.allFinite()) throw NumericalFailure("POD training data has non-finite entries");
    if (frame == Frame::Lagrangian && y.rows() % 2 != 0)
        throw DimensionMismatch("stacked Lagrangian snapshots need 2N rows");
    const TruncatedSvd svd = truncated_svd(y.data, rank);
    return {svd.left_vectors, frame, svd.full_singular_values};
}

namespace {

void check_frame(const PodBasis& basis, Frame frame, int expected_rows) {
    if (basis.frame != frame) throw InvalidProblem("POD basis frame is " + to_string(basis.frame));
    if (basis.rows() != expected_rows)
        throw DimensionMismatch("POD basis has " + std::to_string(basis.rows()) + " rows, expected " +
                                std::to_string(expected_rows));
}

[[noreturn]] void diverged(int time_index, double residual) {
    throw NewtonDivergence("Newton iteration failed at time index " + std::to_string(time_index) +
                           " with projected residual " + std::to_string(residual));
}

// Shared Newton driver: `residual(z)` returns Phi^T R(Phi z), `jacobian(z)`
// the r x r projected Jacobian.
template <class Residual, class Jacobian>
Vector newton(Vector z, double scale, int time_index, const NewtonOptions& opt, NewtonReport* report,
              Residual&& residual, Jacobian&& jacobian) {
    const double tol = opt.tolerance * std::max(1.0, scale);
    for (int it = 0;; ++it) {
        const Vector g = residual(z);
        const double res = g.norm();
        if (!std::isfinite(res)) diverged(time_index, res);
        if (res <= tol) {
            if (report) *report = {it, res};
            return z;
        }
        if (it == opt.max_iterations) diverged(time_index, res);
        const Matrix j = jacobian(z);
        Eigen::PartialPivLU<Matrix> lu(j);
        const Vector dz = lu.solve(g);
        if (!dz.allFinite()) diverged(time_index, res);
        z -= dz;
    }
}

class EulerianPodStepper {
public:
    EulerianPodStepper(const PodBasis& basis, const ProblemSpec& spec) : basis_(basis), hfm_(spec) {
        check_frame(basis, Frame::Eulerian, spec.n_cells);
    }

    Vector step(const Vector& u_hat, int n, const NewtonOptions& opt, NewtonReport* report) {
        const Vector u = basis_.lift(u_hat);
        const Vector u_star = hfm_.advect(u, n);
        const Tridiagonal a = hfm_.implicit_system(u_star, n);
        const Matrix& phi = basis_.basis;
        Matrix a_phi(phi.rows(), phi.cols());
        for (Eigen::Index k = 0; k < phi.cols(); ++k) a_phi.col(k) = a.apply(phi.col(k));
        const Matrix j = phi.transpose() * a_phi;
        const Vector rhs = phi.transpose() * u_star;
        return newton(
            u_hat, u_star.norm(), n, opt, report, [&](const Vector& z) -> Vector { return j * z - rhs; },
            [&](const Vector&) -> const Matrix& { return j; });
    }

private:
    const PodBasis& basis_;
    EulerianStepper hfm_;
};

class LagrangianPodStepper {
public:
    LagrangianPodStepper(const PodBasis& basis, const ProblemSpec& spec) : basis_(basis), hfm_(spec) {
        check_frame(basis, Frame::Lagrangian, 2 * spec.n_cells);
    }

    Vector step(const Vector& z_hat, int n, const NewtonOptions& opt, NewtonReport* report) const {
        const ProblemSpec& spec = hfm_.spec();
        const Eigen::Index nn = spec.n_cells;
        const Vector z = basis_.lift(z_hat);
        const Vector x = z.head(nn);
        const Vector u = z.tail(nn);
        hfm_.check_untangled(x, n);
        const Vector target = hfm_.diffuse_values(x, u, n);
        const double half_dt = 0.5 * spec.dt();
        const Vector f_now = u.unaryExpr(spec.flux_f);

        const auto phi_x = basis_.basis.topRows(nn);
        const auto phi_u = basis_.basis.bottomRows(nn);
        // reduced image of the implicit flux term dt/2 f(u^{n+1})
        auto flux_term = [&](const Vector& zh) -> Vector {
            return phi_x.transpose() * (half_dt * (phi_u * zh).unaryExpr(spec.flux_f));
        };
        auto residual = [&](const Vector& zh) -> Vector {
            const Vector full = basis_.lift(zh);
            Vector r(2 * nn);
            r.head(nn) = full.head(nn) - x - half_dt * f_now;
            r.tail(nn) = full.tail(nn) - target;
            return basis_.project(r) - flux_term(zh);
        };
        auto jacobian = [&](const Vector& zh) -> Matrix {
            const int r = basis_.rank();
            Matrix j = basis_.basis.transpose() * basis_.basis;
            const Vector base = flux_term(zh);
            for (int k = 0; k < r; ++k) {
                Vector p = zh;
                const double h = opt.fd_step * std::max(1.0, std::abs(zh[k]));
                p[k] += h;
                j.col(k) -= (flux_term(p) - base) / h;
            }
            return j;
        };
        return newton(z_hat, z.norm(), n, opt, report, residual, jacobian);
    }

    void check_untangled(const Vector& z_hat, int n) const {
        hfm_.check_untangled(basis_.lift(z_hat).head(hfm_.spec().n_cells), n);
    }

private:
    const PodBasis& basis_;
    LagrangianStepper hfm_;
};

}  // namespace

Vector pod_step_eulerian(const PodBasis& basis, const Vector& u_hat, const ProblemSpec& spec, int time_index,
                         const NewtonOptions& options, NewtonReport* report) {
    if (u_hat.size() != basis.rank()) throw DimensionMismatch("reduced state length differs from the POD rank");
    EulerianPodStepper stepper(basis, spec);
    return stepper.step(u_hat, time_index, options, report);
}

Vector pod_step_lagrangian(const PodBasis& basis, const Vector& z_hat, const ProblemSpec& spec, int time_index,
                           const NewtonOptions& options, NewtonReport* report) {
    if (z_hat.size() != basis.rank()) throw DimensionMismatch("reduced state length differs from the POD rank");
    const LagrangianPodStepper stepper(basis, spec);
    return stepper.step(z_hat, time_index, options, report);
}

PodRun run_pod_rom(const PodBasis& basis, const Vector& initial, const ProblemSpec& spec, int horizon,
                   const NewtonOptions& options) {
    spec.validate();
    if (horizon < 0 || horizon > spec.n_steps) throw InvalidProblem("POD horizon must lie in [0, M]");
    if (initial.size() != basis.rows()) throw DimensionMismatch("initial state length differs from the basis");
    const auto start = std::chrono::steady_clock::now();

    std::optional<EulerianPodStepper> eulerian;
    std::optional<LagrangianPodStepper> lagrangian;
    if (basis.frame == Frame::Eulerian)
        eulerian.emplace(basis, spec);
    else
        lagrangian.emplace(basis, spec);

    PodRun run;
    run.reduced.resize(basis.rank(), horizon + 1);
    run.reduced.col(0) = basis.project(initial);
    for (int n = 0; n < horizon; ++n) {
        NewtonReport rep;
        run.reduced.col(n + 1) = eulerian ? eulerian->step(run.reduced.col(n), n, options, &rep)
                                          : lagrangian->step(run.reduced.col(n), n, options, &rep);
        run.iterations.push_back(rep.iterations);
    }
    if (lagrangian) lagrangian->check_untangled(run.reduced.col(horizon), horizon);

    run.trajectory.data = basis.basis * run.reduced;
    for (int k = 0; k <= horizon; ++k) run.trajectory.col_times.push_back(k);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace ldmd
