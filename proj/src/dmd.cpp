#include "ldmd/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ldmd/svd.hpp"

namespace ldmd {

std::string to_string(ObservableKind kind) {
    switch (kind) {
        case ObservableKind::State: return "state";
        case ObservableKind::LagrangianStacked: return "lagrangian-stacked";
        case ObservableKind::LevelSetField: return "levelset-field";
    }
    return "state";
}

ObservableKind observable_kind_from_string(const std::string& name) {
    if (name == "state") return ObservableKind::State;
    if (name == "lagrangian-stacked") return ObservableKind::LagrangianStacked;
    if (name == "levelset-field") return ObservableKind::LevelSetField;
    throw std::invalid_argument("unknown observable kind: " + name);
}

Vector ObservableMap::forward(const Vector& values, const Vector& positions) const {
    if (kind_ == ObservableKind::State) return values;
    if (positions.size() != values.size()) throw DimensionMismatch("positions and values differ in length");
    Vector y(2 * values.size());
    y << positions, values;
    return y;
}

std::pair<Vector, Vector> ObservableMap::inverse(const Vector& y) const {
    if (kind_ == ObservableKind::State) return {Vector(), y};
    if (y.size() % 2 != 0) throw DimensionMismatch("stacked observable must have even length");
    const Eigen::Index n = y.size() / 2;
    return {y.head(n), y.tail(n)};
}

std::pair<Matrix, Matrix> split_pairs(const Matrix& y) {
    if (y.cols() < 2) throw TooFewSnapshots("DMD needs at least two snapshots");
    const Eigen::Index m = y.cols();
    return {y.leftCols(m - 1), y.rightCols(m - 1)};
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a) {
    Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalFailure("SVD of the mode matrix did not converge");
    const Vector& s = svd.singularValues();
    const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * (s.size() ? s[0] : 0.0) *
                       std::numeric_limits<double>::epsilon();
    Vector inv = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tol) inv[i] = 1.0 / s[i];
    return svd.matrixV() * inv.cast<std::complex<double>>().asDiagonal() * svd.matrixU().adjoint();
}

namespace {

std::complex<double> power(std::complex<double> z, int k) {
    if (k == 0) return {1.0, 0.0};
    if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    // binary powering keeps the cost independent of k up to log factors
    std::complex<double> result(1.0, 0.0);
    std::complex<double> base = z;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1u) result *= base;
        base *= base;
        e >>= 1u;
    }
    return result;
}

}  // namespace

DmdModel fit_dmd(const SnapshotMatrix& y, RankSelection selection, ObservableKind kind) {
    y.validate();
    if (!y.data.allFinite()) throw NumericalFailure("DMD training data has non-finite entries");
    const auto [y1, y2] = split_pairs(y.data);

    const TruncatedSvd svd = truncated_svd(y1, selection);
    const int r = svd.rank;
    if ((svd.singular_values.array() <= 0.0).any()) throw RankDeficient("zero singular value at the requested rank");

    const Matrix k_tilde = svd.left_vectors.transpose() * y2 * svd.right_vectors *
                           svd.singular_values.cwiseInverse().asDiagonal();
    Eigen::EigenSolver<Matrix> eig(k_tilde, true);
    if (eig.info() != Eigen::Success) throw NumericalFailure("eigendecomposition of the reduced operator failed");

    const ComplexVector lambda = eig.eigenvalues();
    const ComplexMatrix w = eig.eigenvectors();
    std::vector<int> order(static_cast<size_t>(r));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(lambda[a]), mb = std::abs(lambda[b]);
        if (ma != mb) return ma > mb;
        return lambda[a].imag() > lambda[b].imag();
    });

    DmdModel model;
    model.kind = kind;
    model.base_time_index = y.col_times.front();
    model.training_count = y.cols();
    model.singular_values = svd.full_singular_values;
    model.eigenvalues.resize(r);
    ComplexMatrix w_sorted(r, r);
    for (int i = 0; i < r; ++i) {
        model.eigenvalues[i] = lambda[order[static_cast<size_t>(i)]];
        w_sorted.col(i) = w.col(order[static_cast<size_t>(i)]);
    }
    const ComplexMatrix u = svd.left_vectors.cast<std::complex<double>>();
    model.modes = u * w_sorted;
    // U has orthonormal columns, so (U W)^+ = W^-1 U^T whenever W is invertible
    const Eigen::FullPivLU<ComplexMatrix> w_lu(w_sorted);
    if (w_lu.isInvertible() && w_lu.rcond() > 1e-12)
        model.mode_pseudoinverse = w_lu.inverse() * u.transpose();
    else
        model.mode_pseudoinverse = pseudo_inverse(model.modes);
    model.amplitudes = model.mode_pseudoinverse * y.data.col(0).cast<std::complex<double>>();

    // one-step residual over the training pairs
    const ComplexMatrix coeffs = model.mode_pseudoinverse * y1.cast<std::complex<double>>();
    const ComplexMatrix stepped = model.modes * (model.eigenvalues.asDiagonal() * coeffs);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < y2.cols(); ++k)
        worst = std::max(worst, (stepped.col(k) - y2.col(k).cast<std::complex<double>>()).norm());
    model.training_residual = worst;
    return model;
}

DmdModel fit_lagrangian_dmd(const SnapshotMatrix& y, RankSelection rank) {
    if (y.rows() % 2 != 0) throw DimensionMismatch("stacked Lagrangian snapshots need 2N rows");
    return fit_dmd(y, rank, ObservableKind::LagrangianStacked);
}

Prediction predict_detailed(const DmdModel& model, int k) {
    if (k < model.base_time_index)
        throw IndexBeforeAnchor("prediction index precedes the amplitude anchor");
    const int steps = k - model.base_time_index;
    ComplexVector coeffs(model.rank());
    for (int i = 0; i < model.rank(); ++i) coeffs[i] = power(model.eigenvalues[i], steps) * model.amplitudes[i];
    const ComplexVector y = model.modes * coeffs;
    Prediction p{y.real(), y.imag().norm()};
    const double scale = p.values.norm();
    if (!(p.imaginary_norm <= 1e-6 * scale + 1e-12))
        throw NumericalFailure("DMD prediction at index " + std::to_string(k) + " has imaginary part " +
                               std::to_string(p.imaginary_norm) + " against norm " + std::to_string(scale));
    return p;
}

Vector predict(const DmdModel& model, int k) { return predict_detailed(model, k).values; }

Vector advance_observable(const DmdModel& model, const Vector& y) {
    const ComplexVector c = model.mode_pseudoinverse * y.cast<std::complex<double>>();
    return (model.modes * (model.eigenvalues.asDiagonal() * c)).real();
}

ReconstructedState reconstruct_state(const Vector& prediction, const Grid1D& eulerian_grid, Extrapolation ext,
                                     int time_index) {
    if (prediction.size() != 2 * eulerian_grid.size())
        throw DimensionMismatch("stacked prediction length must be twice the grid size");
    ReconstructedState out;
    const Eigen::Index n = eulerian_grid.size();
    out.positions = prediction.head(n);
    out.values = prediction.tail(n);
    bool ok = out.positions.allFinite() && strictly_increasing(out.positions);
    if (ok && ext.kind == Extrapolation::Kind::Periodic) ok = out.positions[n - 1] - out.positions[0] < ext.period;
    if (!ok) throw GridEntanglement("predicted Lagrangian grid is entangled", time_index);
    out.on_eulerian = linear_interpolate(out.positions, out.values, eulerian_grid.nodes(), ext);
    return out;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

void write_complex_vector(std::ostream& out, const char* tag, const ComplexVector& v) {
    out << '[' << tag << "]\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i].real() << ',' << v[i].imag() << '\n';
}

void write_real_block(std::ostream& out, const char* tag, const Matrix& m) {
    out << '[' << tag << "]\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    return v;
}

std::string expect_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated DMD model file");
    return line;
}

}  // namespace

void save_model(const DmdModel& model, std::ostream& out) {
    const auto old_precision = out.precision(17);
    out << "# ldmd dmd model v1\n";
    out << "kind," << to_string(model.kind) << '\n';
    out << "base_time_index," << model.base_time_index << '\n';
    out << "training_count," << model.training_count << '\n';
    out << "rows," << model.rows() << '\n';
    out << "rank," << model.rank() << '\n';
    out << "training_residual," << model.training_residual << '\n';
    write_complex_vector(out, "eigenvalues", model.eigenvalues);
    write_complex_vector(out, "amplitudes", model.amplitudes);
    write_real_block(out, "modes_real", model.modes.real());
    write_real_block(out, "modes_imag", model.modes.imag());
    out.precision(old_precision);
}

DmdModel load_model(std::istream& in) {
    DmdModel model;
    std::string line = expect_line(in);
    if (line.rfind("# ldmd dmd model", 0) != 0) throw std::runtime_error("not a DMD model file");

    int rows = 0, rank = 0;
    auto header_value = [&](const std::string& key) {
        const std::string l = expect_line(in);
        const auto comma = l.find(',');
        if (comma == std::string::npos || l.substr(0, comma) != key)
            throw std::runtime_error("expected header key " + key);
        return l.substr(comma + 1);
    };
    model.kind = observable_kind_from_string(header_value("kind"));
    model.base_time_index = std::stoi(header_value("base_time_index"));
    model.training_count = std::stoi(header_value("training_count"));
    rows = std::stoi(header_value("rows"));
    rank = std::stoi(header_value("rank"));
    model.training_residual = std::stod(header_value("training_residual"));

    auto read_complex = [&](const std::string& tag) {
        if (expect_line(in) != "[" + tag + "]") throw std::runtime_error("expected block " + tag);
        ComplexVector v(rank);
        for (int i = 0; i < rank; ++i) {
            const auto row = parse_row(expect_line(in));
            if (row.size() != 2) throw std::runtime_error("malformed complex entry in " + tag);
            v[i] = {row[0], row[1]};
        }
        return v;
    };
    auto read_real = [&](const std::string& tag) {
        if (expect_line(in) != "[" + tag + "]") throw std::runtime_error("expected block " + tag);
        Matrix m(rows, rank);
        for (int i = 0; i < rows; ++i) {
            const auto row = parse_row(expect_line(in));
            if (static_cast<int>(row.size()) != rank) throw std::runtime_error("malformed row in " + tag);
            for (int j = 0; j < rank; ++j) m(i, j) = row[static_cast<size_t>(j)];
        }
        return m;
    };
    model.eigenvalues = read_complex("eigenvalues");
    model.amplitudes = read_complex("amplitudes");
    const Matrix re = read_real("modes_real");
    const Matrix im = read_real("modes_imag");
    model.modes = re.cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
    model.mode_pseudoinverse = pseudo_inverse(model.modes);
    return model;
}

}  // namespace ldmd
