#pragma once

#include <iosfwd>
#include <vector>

#include "ldmd/core.hpp"
#include "ldmd/dmd.hpp"

namespace ldmd {

/// Per-column 2-norm of reference - rom. Shapes and time indices must match.
Vector truncation_error(const SnapshotMatrix& reference, const SnapshotMatrix& rom);

/// Per-column ||reference - rom|| / ||reference|| (absolute where the
/// reference column vanishes).
Vector relative_error(const SnapshotMatrix& reference, const SnapshotMatrix& rom);

/// Largest one-step residual ||y^{k+1} - Phi Lambda Phi^+ y^k||_2 over the
/// training pairs.
double estimate_eps_m(const DmdModel& model, const SnapshotMatrix& training);

/// Largest one-step residual along reference observables over the steps
/// from the last training index on. `reference.col_times` gives the time
/// index of each column; pairs must be consecutive in time.
double prediction_residual(const DmdModel& model, const SnapshotMatrix& reference);

/// ||Phi^+||_F
double pinv_frobenius_norm(const DmdModel& model);

/// ||Phi^+||_F (anchor_error + (n - m) eps_m) with m the last training index.
/// Throws IndexBeforeAnchor for n < m.
double error_bound(const DmdModel& model, int n, double anchor_error, double eps_m);

struct ErrorReport {
    std::vector<int> times;
    double dt = 0.0;
    Vector errors;        // observable-space E^n
    Vector state_errors;  // relative state-space error on the Eulerian grid
    Vector bound;         // NaN before the anchor; empty for non-DMD methods
    double phi_pinv_fnorm = 0.0;
    double eps_m = 0.0;           // constant used by the bound
    double eps_m_training = 0.0;  // training-pair residual alone
    double anchor_error = 0.0;

    /// bound >= errors wherever the bound is defined.
    bool bound_holds() const;
};

/// Attaches the bound columns of a DMD run to an existing report. eps_m is
/// the training residual, raised to the prediction residual along
/// `reference` when one is given: the bound accumulates one-step errors over
/// steps m .. n - 1, which the training pairs do not cover.
void attach_bound(ErrorReport& report, const DmdModel& model, const SnapshotMatrix& training,
                  const SnapshotMatrix* reference = nullptr);

/// CSV with header n,t,error_state,error_observable,bound.
void write_error_csv(const ErrorReport& report, std::ostream& out);

}  // namespace ldmd
