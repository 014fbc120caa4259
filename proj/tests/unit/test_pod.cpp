#include <cmath>

#include "doctest.h"
#include "ldmd/hfm_eulerian.hpp"
#include "ldmd/hfm_lagrangian.hpp"
#include "ldmd/pod.hpp"
#include "support.hpp"

using namespace ldmd;
using testing::burgers_problem;
using testing::linear_problem;

namespace {

Vector stacked(const LagrangianRun& run, int k) {
    Vector y(2 * run.positions.rows());
    y << run.positions.col(k), run.values.col(k);
    return y;
}

// Basis spanning every reference state, so a Galerkin ROM is the full scheme.
PodBasis complete_basis(const Matrix& states, Frame frame) {
    SnapshotMatrix all{states, {}};
    for (int k = 0; k < states.cols(); ++k) all.col_times.push_back(k);
    return fit_pod(all, RankSelection::energy(1e-15), frame);
}

}  // namespace

TEST_CASE("repeated column gives a rank one basis") {
    const Vector y = (Vector(4) << 1.0, 2.0, -1.0, 0.5).finished();
    SnapshotMatrix s{y.replicate(1, 6), {1, 2, 3, 4, 5, 6}};
    const PodBasis b = fit_pod(s, RankSelection::energy(1e-8), Frame::Eulerian);
    CHECK(b.rank() == 1);
    CHECK(std::abs(std::abs(b.basis.col(0).dot(y.normalized())) - 1.0) < 1e-14);
}

TEST_CASE("desk Test 1 Lagrangian snapshots need few POD modes") {
    const ProblemSpec s = preset_problem(Preset::Test1, 10);
    const LagrangianRun run = run_lagrangian_hfm(s, 25);
    const PodBasis b = fit_pod(run.stacked, RankSelection::energy(1e-8), Frame::Lagrangian);
    CHECK(b.rank() <= 5);
}

TEST_CASE("projection error is bounded by the next singular value") {
    const ProblemSpec s = burgers_problem(100, 50, 0.1);
    const EulerianRun run = run_eulerian_hfm(s, 20);
    const PodBasis b = fit_pod(run.snapshots, RankSelection::fixed(4), Frame::Eulerian);
    for (int k = 0; k < 20; ++k) {
        const Vector y = run.snapshots.data.col(k);
        CHECK((y - b.lift(b.project(y))).norm() <= b.singular_values[4] * (1.0 + 1e-12));
    }
}

TEST_CASE("linear Eulerian problem converges in one Newton step") {
    const ProblemSpec s = linear_problem(100, 100, 1.0, 1e-3, Boundary::DirichletZero);
    const EulerianRun run = run_eulerian_hfm(s, 25);
    const PodBasis b = fit_pod(run.snapshots, RankSelection::fixed(10), Frame::Eulerian);
    const Vector z0 = b.project(s.initial_state());
    NewtonReport rep;
    const Vector z1 = pod_step_eulerian(b, z0, s, 0, {}, &rep);
    CHECK(rep.iterations == 1);
    const Vector z2 = pod_step_eulerian(b, z1, s, 1);
    const PodRun two = run_pod_rom(b, s.initial_state(), s, 2);
    CHECK((two.reduced.col(2) - z2).norm() < 1e-13);
}

TEST_CASE("zero state is a fixed point") {
    const ProblemSpec s = linear_problem(60, 60, 1.0, 1e-2, Boundary::DirichletZero);
    const EulerianRun run = run_eulerian_hfm(s, 10);
    const PodBasis b = fit_pod(run.snapshots, RankSelection::fixed(3), Frame::Eulerian);
    CHECK(pod_step_eulerian(b, Vector::Zero(3), s, 0).norm() == 0.0);
}

TEST_CASE("complete Eulerian basis reproduces the HFM") {
    const ProblemSpec s = burgers_problem(40, 40, 0.1);
    const EulerianRun run = run_eulerian_hfm(s, 0);
    const PodBasis b = complete_basis(Matrix::Identity(40, 40), Frame::Eulerian);
    REQUIRE(b.rank() == 40);
    const PodRun rom = run_pod_rom(b, s.initial_state(), s, 40);
    CHECK((rom.trajectory.data - run.trajectory).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("complete Lagrangian basis reproduces the HFM") {
    const ProblemSpec s = burgers_problem(30, 30, 0.05, 0.5);
    const LagrangianRun run = run_lagrangian_hfm(s, 0);
    const PodBasis b = complete_basis(Matrix::Identity(60, 60), Frame::Lagrangian);
    const PodRun rom = run_pod_rom(b, stacked(run, 0), s, 30);
    for (int k = 0; k <= 30; ++k) CHECK((rom.trajectory.data.col(k) - stacked(run, k)).norm() < 1e-8);
}

TEST_CASE("constant speed Lagrangian problem is affine") {
    const ProblemSpec s = linear_problem(100, 50, 1.0, 0.0, Boundary::DirichletZero);
    const LagrangianRun run = run_lagrangian_hfm(s, 25);
    const PodBasis b = fit_pod(run.stacked, RankSelection::energy(1e-8), Frame::Lagrangian);
    const PodRun rom = run_pod_rom(b, stacked(run, 0), s, 50);
    for (int it : rom.iterations) CHECK(it <= 1);
    CHECK((rom.trajectory.data.col(50) - stacked(run, 50)).norm() < 1e-8);
}

TEST_CASE("horizon zero is a projection of the initial state") {
    const ProblemSpec s = preset_problem(Preset::Test2, 10);
    const LagrangianRun run = run_lagrangian_hfm(s, 25);
    const PodBasis b = fit_pod(run.stacked, RankSelection::fixed(3), Frame::Lagrangian);
    const Vector z0 = stacked(run, 0);
    const PodRun rom = run_pod_rom(b, z0, s, 0);
    const double expected = (z0 - b.basis * (b.basis.transpose() * z0)).norm();
    CHECK((rom.trajectory.data.col(0) - z0).norm() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("desk Test 4 Lagrangian POD stays finite and untangled") {
    const ProblemSpec s = preset_problem(Preset::Test4, 10);
    const LagrangianRun run = run_lagrangian_hfm(s, 25);
    const PodBasis b = fit_pod(run.stacked, RankSelection::energy(1e-8), Frame::Lagrangian);
    PodRun rom;
    REQUIRE_NOTHROW(rom = run_pod_rom(b, stacked(run, 0), s, s.n_steps));
    CHECK(rom.trajectory.data.allFinite());
}

TEST_CASE("frame mismatch is rejected") {
    const ProblemSpec s = linear_problem(20, 20, 1.0, 0.0, Boundary::DirichletZero);
    const PodBasis b = complete_basis(Matrix::Identity(20, 20), Frame::Eulerian);
    CHECK_THROWS_AS(pod_step_lagrangian(b, Vector::Zero(20), s, 0), InvalidProblem);
}
