#pragma once

// Dense complex linear algebra shared by every other module.  Thin contracts
// over Eigen with explicit failure modes instead of silently propagating NaNs.

#include <Eigen/Dense>

#include <complex>

#include "xnet/errors.hpp"

namespace xnet {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kSingularityRelTol = 1e-12;
inline constexpr double kRankRelTol = 1e-9;

struct SvdResult {
  RVec singular_values;  // descending, nonnegative
  CMat u;                // m x m unitary
  CMat v;                // n x n unitary; a = u * diag(s) * v^H
};

struct EigResult {
  CVec values;
  CMat vectors;  // unit-norm columns, one per eigenvalue
};

/// A^{-1}, gated on conditioning: requires sigma_min > 1e-12 * sigma_max.
/// Throws SingularMatrix otherwise.
CMat inverse(const CMat& a);

/// Eigen-decomposition of a general square complex matrix.  Throws
/// DefectiveMatrix when the eigenvector basis is unusable (residual
/// ||A v - lambda v|| > 1e-8 ||A|| or basis numerically singular).
EigResult eig_general(const CMat& a);

SvdResult svd(const CMat& a);

/// Count of singular values above rel_tol * sigma_max; 0 for the zero matrix.
Eigen::Index numeric_rank(const CMat& a, double rel_tol = kRankRelTol);

CMat kron(const CMat& a, const CMat& b);

bool is_finite(const CMat& a);

}  // namespace xnet
