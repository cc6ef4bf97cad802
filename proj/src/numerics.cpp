#include "xnet/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace xnet {

bool is_finite(const CMat& a) {
  return a.allFinite();
}

CMat inverse(const CMat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse: matrix not square");
  Eigen::JacobiSVD<CMat> dec(a);
  const RVec& s = dec.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) <= kSingularityRelTol * s(0))
    throw SingularMatrix("inverse: matrix numerically singular");
  CMat inv = a.partialPivLu().inverse();
  if (!is_finite(inv)) throw SingularMatrix("inverse: non-finite result");
  return inv;
}

EigResult eig_general(const CMat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("eig_general: matrix not square");
  Eigen::ComplexEigenSolver<CMat> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("eig_general: eigensolver did not converge");
  EigResult r{es.eigenvalues(), es.eigenvectors()};
  const double anorm = a.norm();
  for (Eigen::Index k = 0; k < r.values.size(); ++k) {
    const double nv = r.vectors.col(k).norm();
    if (nv == 0.0) throw DefectiveMatrix("eig_general: zero eigenvector");
    r.vectors.col(k) /= nv;
    const double resid = (a * r.vectors.col(k) - r.values(k) * r.vectors.col(k)).norm();
    if (resid > 1e-8 * std::max(anorm, 1.0))
      throw DefectiveMatrix("eig_general: residual beyond tolerance");
  }
  Eigen::JacobiSVD<CMat> basis(r.vectors);
  const RVec& s = basis.singularValues();
  if (s(s.size() - 1) <= kSingularityRelTol * s(0))
    throw DefectiveMatrix("eig_general: eigenvector basis numerically singular");
  return r;
}

SvdResult svd(const CMat& a) {
  if (!is_finite(a)) throw ConvergenceFailure("svd: non-finite input");
  Eigen::JacobiSVD<CMat> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult r{dec.singularValues(), dec.matrixU(), dec.matrixV()};
  if (!r.singular_values.allFinite())
    throw ConvergenceFailure("svd: non-finite singular values");
  return r;
}

Eigen::Index numeric_rank(const CMat& a, double rel_tol) {
  Eigen::JacobiSVD<CMat> dec(a);
  const RVec& s = dec.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++n;
  return n;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace xnet
