#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ldmd/csv.hpp"
#include "ldmd/levelset.hpp"
#include "support.hpp"

using namespace ldmd;
using testing::burgers_problem;

namespace {

// u(x, t) from the characteristics x = x0 + t u0(x0), solved by bisection on x0
double characteristic_solution(double x, double t) {
    auto g = [&](double x0) { return x0 + t * (1.0 + std::sin(x0)) - x; };
    double lo = x - 2.0 * t - 1e-9, hi = x + 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    return 1.0 + std::sin(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("zero initial condition embeds as y") {
    const Grid1D xg = Grid1D::uniform(0.0, 1.0, 5, Boundary::DirichletZero);
    const Grid1D yg = Grid1D::uniform(-1.0, 1.0, 4, Boundary::DirichletZero);
    const LevelSetField f = embed_initial([](double) { return 0.0; }, xg, yg);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 5; ++j) CHECK(f.values(i, j) == yg[i]);
}

TEST_CASE("constant initial condition gives a horizontal contour") {
    const Grid1D xg = Grid1D::uniform(0.0, 1.0, 6, Boundary::DirichletZero);
    const Grid1D yg = Grid1D::uniform(0.0, 1.0, 11, Boundary::DirichletZero);
    const LevelSetField f = embed_initial([](double) { return 0.43; }, xg, yg);
    CHECK((extract_zero_contour(f).values.array() - 0.43).abs().maxCoeff() < 1e-15);
}

TEST_CASE("sine initial condition is recovered on a wide y grid") {
    const ProblemSpec s = burgers_problem(100, 50, 0.0);
    const Grid1D xg = s.eulerian_grid();
    const Grid1D yg = Grid1D::uniform(-0.2, 2.2, 49, Boundary::DirichletZero);
    const LevelSetField f = embed_initial(s.initial_u0, xg, yg);
    // c0 is linear in y, so the interpolated root is exact
    CHECK((extract_zero_contour(f).values - s.initial_state()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("uncovered range is rejected") {
    const Grid1D xg = Grid1D::uniform(0.0, 2.0 * M_PI, 20, Boundary::Periodic);
    const Grid1D yg = Grid1D::uniform(0.0, 2.0, 10, Boundary::DirichletZero);
    CHECK_THROWS_AS(embed_initial([](double x) { return 1.0 + std::sin(x); }, xg, yg), RangeNotCovered);
}

TEST_CASE("default y grid") {
    CHECK(default_levelset_ny(200) == 20);
    CHECK(default_levelset_ny(10) == 3);
    const ProblemSpec s = burgers_problem(200, 100, 0.0);
    const Grid1D yg = levelset_y_grid(s, 20);
    CHECK(yg[0] <= -0.2 + 1e-3);
    CHECK(yg[19] >= 2.2 - 1e-3);
}

TEST_CASE("upwind rows") {
    // dx = 2 pi / 20, speed y at Courant 1 needs y dt = dx
    const ProblemSpec s = burgers_problem(20, 10, 0.0);
    const Grid1D xg = s.eulerian_grid();
    const double dx = s.dx(), dt = s.dt();
    Vector yn(2);
    yn << 0.0, dx / dt;
    const Grid1D yg(yn);
    LevelSetField f{xg, yg, Matrix::Random(2, 20), 0};
    const LevelSetField g = advance_levelset(f, s, dt);
    CHECK(g.values.row(0) == f.values.row(0));
    for (int j = 0; j < 20; ++j) CHECK(g.values(1, j) == doctest::Approx(f.values(1, (j + 19) % 20)).epsilon(1e-13));
}

TEST_CASE("contour of a linear field is exact") {
    const Grid1D xg = Grid1D::uniform(0.0, 1.0, 4, Boundary::DirichletZero);
    const Grid1D yg = Grid1D::uniform(0.0, 2.0, 7, Boundary::DirichletZero);
    LevelSetField f{xg, yg, Matrix(7, 4), 0};
    for (int i = 0; i < 7; ++i) f.values.row(i).setConstant(yg[i] - 0.7);
    CHECK((extract_zero_contour(f).values.array() - 0.7).abs().maxCoeff() < 1e-15);
}

TEST_CASE("contours before the shock follow the characteristics to second order in dy") {
    const ProblemSpec s = burgers_problem(200, 100, 0.0, 0.8);
    auto contour_error = [&](int ny) {
        const LevelSetRun run = run_levelset_lagrangian(s, ny, 0);
        const Vector x = s.eulerian_grid().nodes();
        double worst = 0.0;
        for (int j = 0; j < x.size(); ++j)
            worst = std::max(worst, std::abs(run.contours(j, 100) - characteristic_solution(x[j], 0.8)));
        return worst;
    };
    const double coarse = contour_error(20), fine = contour_error(40);
    CHECK(fine < coarse);
    CHECK(std::log2(coarse / fine) > 1.5);
}

TEST_CASE("embedded initial condition converges at second order in dy") {
    // sample off the y nodes: contour of a c field built from a curved u0 on a y grid
    const ProblemSpec s = burgers_problem(200, 100, 0.0);
    auto err = [&](int ny) {
        const Grid1D xg = s.eulerian_grid();
        const Grid1D yg = levelset_y_grid(s, ny);
        // c = (y - u0)^3 keeps the root but makes the column profile curved
        LevelSetField f = embed_initial(s.initial_u0, xg, yg);
        f.values = f.values.array().cube().matrix() + 0.5 * f.values;
        return (extract_zero_contour(f).values - s.initial_state()).cwiseAbs().maxCoeff();
    };
    const double e1 = err(20), e2 = err(40);
    CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("crossed characteristics produce multiple sign changes") {
    const Grid1D xg = Grid1D::uniform(0.0, 1.0, 3, Boundary::DirichletZero);
    const Grid1D yg = Grid1D::uniform(0.0, 1.0, 5, Boundary::DirichletZero);
    LevelSetField f{xg, yg, Matrix::Ones(5, 3), 0};
    // folded column: the curve passes the same x three times
    f.values.col(1) << -1.0, 1.0, -1.0, 1.0, 1.0;
    f.values.col(0) << -1.0, 1.0, 1.0, 1.0, 1.0;
    f.values.col(2) << -1.0, -1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(extract_zero_contour(f), MultipleSignChanges);
    f.values.col(1).setConstant(1.0);
    CHECK_THROWS_AS(extract_zero_contour(f), NoSignChange);
}

TEST_CASE("level set carried past the shock folds") {
    const ProblemSpec s = burgers_problem(200, 200, 0.0, 2.0);
    CHECK_THROWS_AS(run_levelset_lagrangian(s, 40, 0), MultipleSignChanges);
}

TEST_CASE("flattening is column major and invertible") {
    Matrix b(2, 3);
    b << 1, 2, 3, 4, 5, 6;
    const Vector f = flatten_field(b);
    CHECK(f[1] == 4.0);
    CHECK(unflatten_field(f, 2, 3) == b);
    CHECK_THROWS_AS(unflatten_field(f, 4, 3), DimensionMismatch);
}

TEST_CASE("desk level-set DMD") {
    const ProblemSpec s = preset_problem(Preset::LevelSet, 10);
    const LevelSetRun run = run_levelset_lagrangian(s, default_levelset_ny(s.n_cells), 25);
    const DmdModel m = levelset_dmd(run.observables, RankSelection::energy(1e-8));
    CHECK(m.rank() >= 2);
    CHECK(m.rank() <= 4);
    const Vector c = predict_contour(m, 50, run.x_grid, run.y_grid, s.extrapolation());
    CHECK((c - run.contours.col(50)).norm() / run.contours.col(50).norm() < 1e-6);
}

TEST_CASE("constant field has a unit eigenvalue") {
    const Vector y = Vector::LinSpaced(8, 0.0, 1.0);
    SnapshotMatrix s{y.replicate(1, 4), {1, 2, 3, 4}};
    const DmdModel m = fit_dmd(s, RankSelection::energy(1e-8), ObservableKind::LevelSetField);
    REQUIRE(m.rank() == 1);
    CHECK(std::abs(m.eigenvalues[0] - 1.0) < 1e-12);
}

TEST_CASE("field CSV") {
    std::stringstream out;
    write_field_csv(out, Matrix::Ones(6, 2), {0.1, 0.2}, 3, 2);
    const csv::Table t = csv::read(out);
    CHECK(t.header.size() == 7);
    CHECK(t.header[1] == "c_1");
    CHECK(t.rows.size() == 2);
}
