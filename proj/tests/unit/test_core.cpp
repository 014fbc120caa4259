#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "ldmd/core.hpp"
#include "support.hpp"

using namespace ldmd;

TEST_CASE("uniform grids") {
    const Grid1D d = Grid1D::uniform(0.0, 2.0, 5, Boundary::DirichletZero);
    CHECK(d.size() == 5);
    CHECK(d[0] == 0.0);
    CHECK(d[4] == doctest::Approx(2.0));
    CHECK(d.is_uniform());
    const Grid1D p = Grid1D::uniform(0.0, 2.0, 4, Boundary::Periodic);
    CHECK(p[3] == doctest::Approx(1.5));
}

TEST_CASE("grid construction rejects non-monotone nodes") {
    Vector v(3);
    v << 0.0, 1.0, 1.0;
    CHECK_THROWS_AS(Grid1D{v}, NonMonotonicGrid);
}

TEST_CASE("interpolation on identical grids is the identity") {
    const Grid1D g = Grid1D::uniform(0.0, 1.0, 7, Boundary::DirichletZero);
    Vector u = Vector::Random(7);
    CHECK((linear_interpolate(g, u, g) - u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interpolation reproduces linear functions") {
    Vector src(5), dst(4);
    src << 0.0, 0.3, 0.35, 1.2, 2.0;
    dst << 0.1, 0.34, 1.0, 1.99;
    const Vector vals = (2.0 * src.array() + 1.0).matrix();
    const Vector out = linear_interpolate(src, vals, dst);
    for (int i = 0; i < dst.size(); ++i) CHECK(out[i] == doctest::Approx(2.0 * dst[i] + 1.0).epsilon(1e-14));
}

TEST_CASE("interpolation hand value") {
    Vector src(3), vals(3), dst(1);
    src << 0.0, 1.0, 2.0;
    vals << 0.0, 1.0, 0.0;
    dst << 0.5;
    CHECK(linear_interpolate(src, vals, dst)[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("clamp and periodic extrapolation") {
    Vector src(3), vals(3), dst(2);
    src << 1.0, 2.0, 3.0;
    vals << 4.0, 5.0, 6.0;
    dst << 0.0, 10.0;
    const Vector c = linear_interpolate(src, vals, dst);
    CHECK(c[0] == 4.0);
    CHECK(c[1] == 6.0);
    // period 4: node 0 is node 4 (between 3 and 5 = 1 + 4), half way
    Vector d0(1);
    d0 << 0.0;
    const Vector p = linear_interpolate(src, vals, d0, Extrapolation::periodic(4.0));
    CHECK(p[0] == doctest::Approx(5.0));
}

TEST_CASE("snapshot assembly shapes") {
    std::vector<Vector> states(3, Vector::Ones(4));
    CHECK(assemble_snapshots(states).data.rows() == 4);
    CHECK(assemble_snapshots(states).data.cols() == 3);
    std::vector<Vector> grids(3, Vector::LinSpaced(4, 0.0, 1.0));
    const SnapshotMatrix s = assemble_snapshots(states, grids);
    CHECK(s.rows() == 8);
    CHECK(s.data(1, 0) == doctest::Approx(1.0 / 3.0));

    Vector u(2), x(2);
    u << 1.0, 2.0;
    x << 0.0, 1.0;
    std::vector<Vector> us{u}, xs{x};
    const SnapshotMatrix one = assemble_snapshots(us, xs);
    Vector expected(4);
    expected << 0.0, 1.0, 1.0, 2.0;
    CHECK(one.data.col(0) == expected);
    const auto [top, bottom] = split_stacked(one.data);
    CHECK(top.col(0) == x);
    CHECK(bottom.col(0) == u);
}

TEST_CASE("snapshot validation") {
    SnapshotMatrix s{Matrix::Zero(2, 2), {1, 3}};
    CHECK_THROWS_AS(s.validate(true), DimensionMismatch);
    CHECK_NOTHROW(s.validate(false));
    s.data.col(1).setConstant(std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS(s.validate(false));
}

TEST_CASE("flux consistency") {
    ProblemSpec spec = testing::burgers_problem(10, 10, 0.0);
    const std::vector<double> samples{-1.0, 0.0, 0.5, 2.0};
    CHECK(flux_is_consistent(spec, samples));
    spec.flux_F = [](double u) { return u * u; };
    CHECK_FALSE(flux_is_consistent(spec, samples));
}

TEST_CASE("problem validation") {
    ProblemSpec spec = testing::linear_problem(10, 10, 1.0, 0.0, Boundary::DirichletZero);
    CHECK_NOTHROW(spec.validate());
    spec.n_cells = 1;
    CHECK_THROWS_AS(spec.validate(), InvalidProblem);
}
