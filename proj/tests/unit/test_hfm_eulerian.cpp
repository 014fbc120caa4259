#include <cmath>

#include "doctest.h"
#include "ldmd/hfm_eulerian.hpp"
#include "ldmd/tridiagonal.hpp"
#include "support.hpp"

using namespace ldmd;
using testing::burgers_problem;
using testing::linear_problem;

TEST_CASE("numerical flux is consistent") {
    const ProblemSpec b = burgers_problem(10, 10, 0.0);
    CHECK(numerical_flux(0.7, 0.7, b) == doctest::Approx(0.245));
}

TEST_CASE("linear numerical flux is pure upwind") {
    const ProblemSpec s = linear_problem(10, 10, 1.0, 0.0, Boundary::Periodic);
    CHECK(numerical_flux(0.3, 1.7, s) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(numerical_flux(-2.0, 5.0, s) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("Burgers numerical flux hand value") {
    const ProblemSpec b = burgers_problem(10, 10, 0.0);
    CHECK(std::abs(numerical_flux(0.0, 1.0, b)) < 1e-15);
}

TEST_CASE("constant state is a fixed point") {
    const ProblemSpec s = linear_problem(20, 20, 1.0, 0.0, Boundary::Periodic);
    EulerianStepper step(s);
    const Vector c = Vector::Constant(20, 0.8);
    CHECK((step.advance(c, 0) - c).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("unit Courant number shifts one cell") {
    // dx = 2/20 = 0.1, dt = 1/10 = 0.1
    const ProblemSpec s = linear_problem(20, 10, 1.0, 0.0, Boundary::Periodic);
    EulerianStepper step(s);
    const Vector u = Vector::Random(20);
    const Vector v = step.advance(u, 0);
    for (int j = 0; j < 20; ++j) CHECK(v[j] == doctest::Approx(u[(j + 19) % 20]).epsilon(1e-14));
}

TEST_CASE("pure implicit diffusion loses mass and keeps the maximum") {
    const ProblemSpec s = linear_problem(50, 40, 0.0, 0.05, Boundary::DirichletZero);
    EulerianStepper step(s);
    Vector u = s.initial_state();
    double mass = u.sum(), peak = u.maxCoeff();
    for (int n = 0; n < 40; ++n) {
        u = step.advance(u, n);
        CHECK(u.sum() <= mass + 1e-14);
        CHECK(u.maxCoeff() <= peak + 1e-14);
        mass = u.sum();
        peak = u.maxCoeff();
    }
}

TEST_CASE("scheme residual vanishes after a step") {
    const ProblemSpec s = burgers_problem(64, 40, 0.1);
    EulerianStepper step(s);
    const Vector u0 = s.initial_state();
    const Vector u1 = step.advance(u0, 0);
    CHECK(step.last_residual() < 1e-10);
    CHECK(step.residual(u1, u0, 0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("CFL violation is reported before stepping") {
    const ProblemSpec s = linear_problem(200, 10, 1.0, 0.0, Boundary::DirichletZero);
    EulerianStepper step(s);
    CHECK_THROWS_AS(step.advance(s.initial_state(), 0), CflViolation);
}

TEST_CASE("storing no snapshots keeps the initial state") {
    const ProblemSpec s = linear_problem(40, 40, 1.0, 0.0, Boundary::DirichletZero);
    const EulerianRun run = run_eulerian_hfm(s, 0);
    CHECK(run.snapshots.cols() == 0);
    CHECK(run.trajectory.col(0) == s.initial_state());
}

TEST_CASE("pulse travels at unit speed") {
    const ProblemSpec s = linear_problem(2000, 1000, 1.0, 0.0, Boundary::DirichletZero);
    const EulerianRun run = run_eulerian_hfm(s, 0);
    const Vector x = s.eulerian_grid().nodes();
    for (int n : {0, 250, 500, 1000}) {
        Eigen::Index k;
        run.trajectory.col(n).maxCoeff(&k);
        CHECK(std::abs(x[k] - (0.3 + s.time(n))) < 2.0 * s.dx());
    }
}

TEST_CASE("Burgers solution stays within the initial range") {
    const ProblemSpec s = burgers_problem(200, 100, 0.0);
    const EulerianRun run = run_eulerian_hfm(s, 0);
    CHECK(run.trajectory.minCoeff() >= -1e-12);
    CHECK(run.trajectory.maxCoeff() <= 2.0 + 1e-12);
}

TEST_CASE("periodic advection conserves the discrete sum") {
    const ProblemSpec s = burgers_problem(100, 50, 0.0);
    EulerianStepper step(s);
    Vector u = s.initial_state();
    for (int n = 0; n < 50; ++n) {
        const Vector v = step.advance(u, n);
        CHECK(std::abs(v.sum() - u.sum()) < 1e-12 * std::max(1.0, std::abs(u.sum())));
        u = v;
    }
}

TEST_CASE("tridiagonal solves") {
    Tridiagonal a{Vector::Constant(5, -1.0), Vector::Constant(5, 4.0), Vector::Constant(5, -1.0), false};
    const Vector x = Vector::LinSpaced(5, 1.0, 5.0);
    CHECK((solve_tridiagonal(a, a.apply(x)) - x).norm() < 1e-13);
    a.cyclic = true;
    CHECK((solve_tridiagonal(a, a.apply(x)) - x).norm() < 1e-13);
    CHECK(a.diagonally_dominant());
}
