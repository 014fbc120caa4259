#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>

#include "ldmd/core.hpp"
#include "ldmd/svd.hpp"

namespace ldmd {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class ObservableKind { State, LagrangianStacked, LevelSetField };

std::string to_string(ObservableKind kind);
ObservableKind observable_kind_from_string(const std::string& name);

/// Observables <-> state. The stacked maps (Lagrangian and level-set) send
/// (x, u) to [x; u] and are inverted by splitting at the midpoint; level-set
/// blocks are N_y x N_x fields flattened column-major.
class ObservableMap {
public:
    explicit ObservableMap(ObservableKind kind) : kind_(kind) {}

    ObservableKind kind() const { return kind_; }
    Vector forward(const Vector& values, const Vector& positions = {}) const;
    /// Returns (positions, values); positions is empty for plain state maps.
    std::pair<Vector, Vector> inverse(const Vector& observable) const;

private:
    ObservableKind kind_;
};

/// Fitted linear model y^k ~ Phi Lambda^(k - base) b.
struct DmdModel {
    ComplexMatrix modes;               // p x r
    ComplexVector eigenvalues;         // r, sorted by decreasing modulus
    ComplexVector amplitudes;          // r, anchored at base_time_index
    ComplexMatrix mode_pseudoinverse;  // r x p
    ObservableKind kind = ObservableKind::State;
    int base_time_index = 1;
    int training_count = 0;
    double training_residual = 0.0;  // max one-step residual over training pairs
    Vector singular_values;          // spectrum of Y1 used for the rank choice

    int rank() const { return static_cast<int>(eigenvalues.size()); }
    int rows() const { return static_cast<int>(modes.rows()); }
    int last_training_index() const { return base_time_index + training_count - 1; }
};

/// Y1 = columns 1..m-1, Y2 = columns 2..m. Throws TooFewSnapshots below two.
std::pair<Matrix, Matrix> split_pairs(const Matrix& y);
inline std::pair<Matrix, Matrix> split_pairs(const SnapshotMatrix& y) { return split_pairs(y.data); }

/// Moore-Penrose pseudoinverse through an SVD.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a);

DmdModel fit_dmd(const SnapshotMatrix& y, RankSelection rank, ObservableKind kind = ObservableKind::State);

/// fit_dmd on stacked [x; u] snapshots (2N rows).
DmdModel fit_lagrangian_dmd(const SnapshotMatrix& y, RankSelection rank);

struct Prediction {
    Vector values;
    double imaginary_norm = 0.0;
};

/// Real part of Phi Lambda^(k - base) b together with the discarded
/// imaginary magnitude. Throws NumericalFailure if that magnitude exceeds
/// 1e-6 of the result.
Prediction predict_detailed(const DmdModel& model, int k);
Vector predict(const DmdModel& model, int k);

/// One-step map Phi Lambda Phi^+ y applied to a single observable.
Vector advance_observable(const DmdModel& model, const Vector& y);

struct ReconstructedState {
    Vector positions;    // moving grid
    Vector values;       // carried values on the moving grid
    Vector on_eulerian;  // values interpolated onto the Eulerian grid
};

/// Splits a stacked prediction and interpolates its values onto the fixed
/// grid. Throws GridEntanglement for non-monotone predicted positions.
ReconstructedState reconstruct_state(const Vector& prediction, const Grid1D& eulerian_grid,
                                     Extrapolation ext = Extrapolation::clamp(), int time_index = 0);

/// Text format: a key,value header followed by CSV blocks for the real and
/// imaginary parts of eigenvalues, amplitudes and modes.
void save_model(const DmdModel& model, std::ostream& out);
DmdModel load_model(std::istream& in);

}  // namespace ldmd
