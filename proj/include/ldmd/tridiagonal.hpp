#pragma once

#include "ldmd/core.hpp"

namespace ldmd {

/// Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1].
/// In cyclic systems lower[0] couples to x[n-1] and upper[n-1] to x[0];
/// otherwise those two corner entries are ignored.
struct Tridiagonal {
    Vector lower;
    Vector diag;
    Vector upper;
    bool cyclic = false;

    Eigen::Index size() const { return diag.size(); }
    Vector apply(const Vector& x) const;
    bool diagonally_dominant() const;
};

/// Thomas forward/backward sweep; Sherman-Morrison correction for cyclic
/// systems. No pivoting: callers supply diagonally dominant matrices.
Vector solve_tridiagonal(const Tridiagonal& a, const Vector& rhs);

/// (I - dt D2) on a uniform grid with the boundary closure of `spec`,
/// D evaluated at (x_j, t, u_j) and averaged onto faces.
Tridiagonal implicit_diffusion_matrix(const ProblemSpec& spec, const Grid1D& grid, const Vector& u_for_d, double t);

/// Solves (I - dt D2) v = rhs with D lagged at `rhs`.
Vector implicit_diffusion_solve(const ProblemSpec& spec, const Grid1D& grid, const Vector& rhs, double t);

}  // namespace ldmd
