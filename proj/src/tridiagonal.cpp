#include "ldmd/tridiagonal.hpp"

#include <cmath>

namespace ldmd {

Vector Tridiagonal::apply(const Vector& x) const {
    const Eigen::Index n = size();
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0)
            s += lower[i] * x[i - 1];
        else if (cyclic)
            s += lower[0] * x[n - 1];
        if (i + 1 < n)
            s += upper[i] * x[i + 1];
        else if (cyclic)
            s += upper[n - 1] * x[0];
        y[i] = s;
    }
    return y;
}

bool Tridiagonal::diagonally_dominant() const {
    const Eigen::Index n = size();
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        if (i > 0 || cyclic) off += std::abs(lower[i]);
        if (i + 1 < n || cyclic) off += std::abs(upper[i]);
        if (std::abs(diag[i]) < off) return false;
    }
    return true;
}

namespace {

Vector thomas(const Vector& a, const Vector& b, const Vector& c, const Vector& d) {
    const Eigen::Index n = b.size();
    Vector cp(n), dp(n), x(n);
    if (b[0] == 0.0) throw SingularTridiagonal("zero pivot in tridiagonal solve");
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (Eigen::Index i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp[i - 1];
        if (m == 0.0) throw SingularTridiagonal("zero pivot in tridiagonal solve");
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

}  // namespace

Vector solve_tridiagonal(const Tridiagonal& sys, const Vector& rhs) {
    const Eigen::Index n = sys.size();
    if (rhs.size() != n || sys.lower.size() != n || sys.upper.size() != n)
        throw DimensionMismatch("tridiagonal system and right-hand side sizes differ");
    if (n == 0) return {};
    if (!sys.cyclic || n == 1) return thomas(sys.lower, sys.diag, sys.upper, rhs);

    if (n == 2) {
        // both off-diagonal entries of each row hit the same neighbour
        Eigen::Matrix2d m;
        m << sys.diag[0], sys.lower[0] + sys.upper[0], sys.lower[1] + sys.upper[1], sys.diag[1];
        if (m.determinant() == 0.0) throw SingularTridiagonal("singular 2x2 cyclic system");
        return m.inverse() * rhs;
    }

    const double beta = sys.lower[0];       // top-right corner
    const double alpha = sys.upper[n - 1];  // bottom-left corner
    const double gamma = -sys.diag[0];
    Vector b = sys.diag;
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    const Vector x = thomas(sys.lower, b, sys.upper, rhs);
    Vector u = Vector::Zero(n);
    u[0] = gamma;
    u[n - 1] = alpha;
    const Vector z = thomas(sys.lower, b, sys.upper, u);
    const double denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
    if (denom == 0.0) throw SingularTridiagonal("singular cyclic system");
    const double fact = (x[0] + beta * x[n - 1] / gamma) / denom;
    return x - fact * z;
}

Tridiagonal implicit_diffusion_matrix(const ProblemSpec& spec, const Grid1D& grid, const Vector& u_for_d, double t) {
    const int n = grid.size();
    const double dx = spec.dx();
    const double r = spec.dt() / (dx * dx);
    const bool periodic = spec.bc == Boundary::Periodic;

    Vector d(n);
    for (int j = 0; j < n; ++j) d[j] = spec.diffusion(grid[j], t, u_for_d[j]);

    Tridiagonal sys{Vector(n), Vector(n), Vector(n), periodic};
    for (int j = 0; j < n; ++j) {
        const int jl = j - 1, jr = j + 1;
        // faces beyond a Dirichlet boundary take the boundary node's D
        const double d_left = jl >= 0 ? 0.5 * (d[j] + d[jl]) : periodic ? 0.5 * (d[j] + d[n - 1]) : d[j];
        const double d_right = jr < n ? 0.5 * (d[j] + d[jr]) : periodic ? 0.5 * (d[j] + d[0]) : d[j];
        sys.lower[j] = -r * d_left;
        sys.upper[j] = -r * d_right;
        sys.diag[j] = 1.0 + r * (d_left + d_right);
    }
    return sys;
}

Vector implicit_diffusion_solve(const ProblemSpec& spec, const Grid1D& grid, const Vector& rhs, double t) {
    const Tridiagonal sys = implicit_diffusion_matrix(spec, grid, rhs, t);
    return solve_tridiagonal(sys, rhs);
}

}  // namespace ldmd
