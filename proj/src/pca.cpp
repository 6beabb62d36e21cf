#include "lsbd/pca.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lsbd {
namespace {

// Index of the largest-magnitude entry; earliest index among near-ties.
Eigen::Index dominant_index(const Eigen::Ref<const Vector>& v) {
    const double top = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= top * (1.0 - 1e-9)) return i;
    }
    return 0;
}

void fix_sign(Eigen::Ref<Vector> v) {
    if (v(dominant_index(v)) < 0) v = -v;
}

// Replaces the columns of `basis` (orthonormal, spanning one eigenspace) by a
// basis that depends only on the span.
Matrix canonical_basis(const Matrix& basis) {
    const Eigen::Index dim = basis.rows();
    Matrix remaining = basis;
    Matrix out(dim, basis.cols());
    for (Eigen::Index t = 0; t < basis.cols(); ++t) {
        // ||remaining.row(i)|| is the length of coordinate axis i projected onto the span.
        const Vector row_norms = remaining.rowwise().norm();
        const Eigen::Index pivot = dominant_index(row_norms);
        const Vector a = remaining.row(pivot).transpose() / row_norms(pivot);
        out.col(t) = remaining * a;
        if (remaining.cols() == 1) break;
        const Eigen::HouseholderQR<Matrix> qr{Matrix(a)};
        const Matrix q = qr.householderQ() * Matrix::Identity(a.size(), a.size());
        remaining = (remaining * q.rightCols(a.size() - 1)).eval();
    }
    return out;
}

}  // namespace

EigenPairs top_eigenpairs(const Matrix& sym, int count) {
    const auto n = static_cast<lapack_int>(sym.rows());
    if (sym.rows() != sym.cols()) throw std::invalid_argument("eigen decomposition needs a square matrix");
    if (count < 1 || count > n) {
        throw std::invalid_argument("requested " + std::to_string(count) + " eigenpairs of a " +
                                    std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    if (!sym.allFinite()) throw std::invalid_argument("matrix has non-finite entries");

    // One extra pair lets a degenerate group straddling the cut be detected.
    const lapack_int wanted = std::min<lapack_int>(n, count + 1);
    Matrix a = sym;
    Vector w(n);
    Matrix z(n, wanted);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(wanted));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, n - wanted + 1, n,
                       0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != wanted) {
        throw std::runtime_error("symmetric eigensolver failed (info=" + std::to_string(info) + ")");
    }

    // LAPACK returns ascending order.
    EigenPairs all{Vector(wanted), Matrix(n, wanted)};
    for (lapack_int i = 0; i < wanted; ++i) {
        all.values(i) = w(wanted - 1 - i);
        all.vectors.col(i) = z.col(wanted - 1 - i);
    }

    const double scale = std::max(std::abs(all.values(0)), std::numeric_limits<double>::min());
    // Cheap sanity check against a miscompiled or misconfigured BLAS.
    const double residual = (sym * all.vectors - all.vectors * all.values.asDiagonal()).colwise().norm().maxCoeff();
    const double drift =
        (all.vectors.transpose() * all.vectors - Matrix::Identity(wanted, wanted)).cwiseAbs().maxCoeff();
    if (!(residual <= 1e-8 * scale) || !(drift <= 1e-8)) {
        throw std::runtime_error("symmetric eigensolver returned inaccurate eigenpairs; check the LAPACK/BLAS build");
    }
    for (Eigen::Index begin = 0; begin < wanted;) {
        Eigen::Index end = begin + 1;
        while (end < wanted &&
               std::abs(all.values(end - 1) - all.values(end)) <= kDegenerateEigenTolerance * scale) {
            ++end;
        }
        if (end - begin == 1) {
            fix_sign(all.vectors.col(begin));
        } else {
            all.vectors.middleCols(begin, end - begin) =
                canonical_basis(all.vectors.middleCols(begin, end - begin));
        }
        begin = end;
    }

    return {all.values.head(count), all.vectors.leftCols(count)};
}

Matrix population_covariance(const Matrix& data) {
    if (data.rows() == 0) throw std::invalid_argument("covariance of an empty sample");
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Matrix centered = data.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(data.rows());
}

}  // namespace lsbd
