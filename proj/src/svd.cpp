#include "ldmd/svd.hpp"

#include <limits>
#include <string>

#include <Eigen/SVD>

namespace ldmd {

namespace {

struct Factored {
    Eigen::BDCSVD<Matrix> svd;
    int numerical_rank = 0;
};

Factored factor(const Matrix& x) {
    if (x.size() == 0) throw DimensionMismatch("cannot factor an empty matrix");
    if (!x.allFinite()) throw NumericalFailure("SVD input has non-finite entries");
    Factored f{Eigen::BDCSVD<Matrix>(x, Eigen::ComputeThinU | Eigen::ComputeThinV), 0};
    if (f.svd.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");
    const Vector& s = f.svd.singularValues();
    const double tol = static_cast<double>(std::max(x.rows(), x.cols())) * (s.size() > 0 ? s[0] : 0.0) *
                       std::numeric_limits<double>::epsilon();
    while (f.numerical_rank < s.size() && s[f.numerical_rank] > tol) ++f.numerical_rank;
    if (f.numerical_rank == 0) throw EmptySpectrum("matrix has no singular value above round-off");
    return f;
}

TruncatedSvd keep(const Factored& f, int r) {
    TruncatedSvd out;
    out.full_singular_values = f.svd.singularValues();
    out.rank = r;
    out.singular_values = out.full_singular_values.head(r);
    out.left_vectors = f.svd.matrixU().leftCols(r);
    out.right_vectors = f.svd.matrixV().leftCols(r);
    for (int k = 0; k < r; ++k) {
        auto u = out.left_vectors.col(k);
        Eigen::Index i = 0;
        while (i < u.size() && u[i] == 0.0) ++i;
        if (i < u.size() && u[i] < 0.0) {
            u = -u;
            out.right_vectors.col(k) = -out.right_vectors.col(k);
        }
    }
    return out;
}

}  // namespace

TruncatedSvd reduced_svd(const Matrix& x) {
    const Factored f = factor(x);
    return keep(f, f.numerical_rank);
}

TruncatedSvd truncated_svd(const Matrix& x, RankSelection selection) {
    const Factored f = factor(x);
    if (selection.fixed_rank <= 0)
        return keep(f, truncation_rank(f.svd.singularValues().head(f.numerical_rank), selection.epsilon));
    const int r = selection.fixed_rank;
    const Vector& s = f.svd.singularValues();
    if (r > s.size() || !(s[r - 1] > 0.0))
        throw RankDeficient("requested rank " + std::to_string(r) + " meets a zero singular value");
    return keep(f, r);
}

int truncation_rank(const Vector& sigma, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const double total = sigma.sum();
    if (sigma.size() == 0 || !(total > 0.0)) throw EmptySpectrum("all singular values are zero");
    int r = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma[k] / total >= epsilon) ++r;
    return std::max(r, 1);
}

TruncatedSvd truncate(const TruncatedSvd& svd, int r) {
    if (r < 1 || r > svd.rank)
        throw RankOutOfRange("requested rank " + std::to_string(r) + " outside [1, " + std::to_string(svd.rank) + "]");
    TruncatedSvd out;
    out.rank = r;
    out.left_vectors = svd.left_vectors.leftCols(r);
    out.singular_values = svd.singular_values.head(r);
    out.right_vectors = svd.right_vectors.leftCols(r);
    out.full_singular_values = svd.full_singular_values;
    return out;
}

}  // namespace ldmd
