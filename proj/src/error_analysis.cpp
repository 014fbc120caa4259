#include "ldmd/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "ldmd/csv.hpp"

namespace ldmd {

namespace {
void check_shapes(const SnapshotMatrix& a, const SnapshotMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("snapshot shapes differ: " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
    if (!a.col_times.empty() && !b.col_times.empty() && a.col_times != b.col_times)
        throw DimensionMismatch("snapshot time indices differ");
}
}  // namespace

Vector truncation_error(const SnapshotMatrix& reference, const SnapshotMatrix& rom) {
    check_shapes(reference, rom);
    return (reference.data - rom.data).colwise().norm().transpose();
}

Vector relative_error(const SnapshotMatrix& reference, const SnapshotMatrix& rom) {
    Vector e = truncation_error(reference, rom);
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        const double s = reference.data.col(k).norm();
        if (s > 0.0) e[k] /= s;
    }
    return e;
}

double estimate_eps_m(const DmdModel& model, const SnapshotMatrix& training) {
    if (training.rows() != model.rows()) throw DimensionMismatch("training rows differ from the model");
    double worst = 0.0;
    for (int k = 0; k + 1 < training.cols(); ++k) {
        const Vector next = advance_observable(model, training.data.col(k));
        worst = std::max(worst, (training.data.col(k + 1) - next).norm());
    }
    return worst;
}

double prediction_residual(const DmdModel& model, const SnapshotMatrix& reference) {
    if (reference.rows() != model.rows()) throw DimensionMismatch("reference rows differ from the model");
    if (static_cast<int>(reference.col_times.size()) != reference.cols())
        throw DimensionMismatch("reference needs one time index per column");
    const int m = model.last_training_index();
    double worst = 0.0;
    for (int k = 0; k + 1 < reference.cols(); ++k) {
        const int t = reference.col_times[static_cast<size_t>(k)];
        if (t < m || reference.col_times[static_cast<size_t>(k + 1)] != t + 1) continue;
        const Vector next = advance_observable(model, reference.data.col(k));
        worst = std::max(worst, (reference.data.col(k + 1) - next).norm());
    }
    return worst;
}

double pinv_frobenius_norm(const DmdModel& model) { return model.mode_pseudoinverse.norm(); }

double error_bound(const DmdModel& model, int n, double anchor_error, double eps_m) {
    const int m = model.last_training_index();
    if (n < m) throw IndexBeforeAnchor("error bound requested before the last training index");
    return pinv_frobenius_norm(model) * (anchor_error + (n - m) * eps_m);
}

bool ErrorReport::bound_holds() const {
    for (Eigen::Index k = 0; k < bound.size(); ++k)
        if (!std::isnan(bound[k]) && !(bound[k] >= errors[k])) return false;
    return true;
}

void attach_bound(ErrorReport& report, const DmdModel& model, const SnapshotMatrix& training,
                  const SnapshotMatrix* reference) {
    const int m = model.last_training_index();
    report.eps_m_training = estimate_eps_m(model, training);
    report.eps_m = report.eps_m_training;
    if (reference) report.eps_m = std::max(report.eps_m, prediction_residual(model, *reference));
    report.phi_pinv_fnorm = pinv_frobenius_norm(model);
    report.anchor_error = std::numeric_limits<double>::quiet_NaN();
    for (size_t k = 0; k < report.times.size(); ++k)
        if (report.times[k] == m) report.anchor_error = report.errors[static_cast<Eigen::Index>(k)];
    if (std::isnan(report.anchor_error)) throw IndexBeforeAnchor("report does not contain the last training index");
    report.bound = Vector::Constant(report.errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (size_t k = 0; k < report.times.size(); ++k)
        if (report.times[k] >= m)
            report.bound[static_cast<Eigen::Index>(k)] =
                error_bound(model, report.times[k], report.anchor_error, report.eps_m);
}

void write_error_csv(const ErrorReport& report, std::ostream& out) {
    out << "n,t,error_state,error_observable,bound\n";
    for (size_t k = 0; k < report.times.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out << report.times[k] << ',' << csv::number(report.times[k] * report.dt) << ','
            << csv::number(i < report.state_errors.size() ? report.state_errors[i] : nan) << ','
            << csv::number(i < report.errors.size() ? report.errors[i] : nan) << ','
            << csv::number(i < report.bound.size() ? report.bound[i] : nan) << '\n';
    }
}

}  // namespace ldmd
