#pragma once

#include "ldmd/core.hpp"

namespace ldmd {

/// Leading singular triplets X ~ U diag(sigma) V^T, plus the untruncated
/// spectrum for diagnostics.
struct TruncatedSvd {
    Matrix left_vectors;          // N x r
    Vector singular_values;       // r, descending, > 0
    Matrix right_vectors;         // m x r
    Vector full_singular_values;  // K, before truncation
    int rank = 0;
};

/// Thin SVD keeping the numerical rank: singular values above
/// max(N, m) * sigma_1 * machine epsilon. Each left vector's first nonzero
/// entry is made nonnegative.
TruncatedSvd reduced_svd(const Matrix& x);
inline TruncatedSvd reduced_svd(const SnapshotMatrix& x) { return reduced_svd(x.data); }

/// Number of singular values whose share sigma_k / sum(sigma) is at least
/// epsilon; never less than one. Throws EmptySpectrum for an all-zero input.
int truncation_rank(const Vector& singular_values, double epsilon);

/// Rank rule for a fit: the energy criterion with `epsilon`, or a fixed rank
/// when `fixed_rank` > 0.
struct RankSelection {
    double epsilon = 1e-8;
    int fixed_rank = 0;

    static RankSelection energy(double eps) { return {eps, 0}; }
    static RankSelection fixed(int r) { return {0.0, r}; }
};

/// Keeps the leading r triplets. Throws RankOutOfRange unless 1 <= r <= rank.
TruncatedSvd truncate(const TruncatedSvd& svd, int r);

/// Factors and truncates in one pass. The energy rule only sees singular
/// values above round-off; a fixed rank may reach past them but throws
/// RankDeficient when it meets an exactly zero singular value.
TruncatedSvd truncated_svd(const Matrix& x, RankSelection selection);

}  // namespace ldmd
