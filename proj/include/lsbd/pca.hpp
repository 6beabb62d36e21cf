#pragma once

#include "lsbd/group.hpp"

namespace lsbd {

/// Leading eigenpairs of a symmetric matrix in a reproducible form.
struct EigenPairs {
    Vector values;   // descending
    Matrix vectors;  // one eigenvector per column, orthonormal
};

/// Top `count` eigenpairs of the symmetric matrix `sym`, canonicalized:
///  - eigenvalues are sorted in descending order;
///  - an isolated eigenvector is signed so that its largest-magnitude entry is
///    positive (first such coordinate on ties);
///  - a group of numerically equal eigenvalues has its eigenspace basis
///    replaced by pivoted Gram-Schmidt on the projected coordinate axes, so the
///    result does not depend on the solver's arbitrary choice inside the
///    eigenspace.
EigenPairs top_eigenpairs(const Matrix& sym, int count);

/// Relative gap under which two eigenvalues are treated as equal.
inline constexpr double kDegenerateEigenTolerance = 1e-9;

/// Population covariance (divide by N) of the rows of `data`.
Matrix population_covariance(const Matrix& data);

}  // namespace lsbd
