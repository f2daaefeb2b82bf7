#include "ubva/svd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ubva/errors.hpp"

namespace ubva {

namespace {

// Structural rank cap: standardization centers each vector along the axis,
// which removes one degree of freedom from the other dimension.
Eigen::Index rank_cap(Eigen::Index n, Eigen::Index p, Axis axis) {
  return axis == Axis::kColumns ? std::min(n - 1, p) : std::min(n, p - 1);
}

}  // namespace

SvdFactors thin_svd(const StandardizedMatrix& x) {
  const Eigen::Index n = x.n();
  const Eigen::Index p = x.p();
  const Eigen::Index m = rank_cap(n, p, x.axis);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x.values,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalFailureError("SVD did not converge");
  }

  SvdFactors f;
  f.n = n;
  f.p = p;
  f.axis = x.axis;
  f.d = svd.singularValues().head(m);
  f.u = svd.matrixU().leftCols(m);
  f.v = svd.matrixV().leftCols(m);
  f.rank_tol = f.d(0) * kRankTolFactor;
  return f;
}

SvdFactors gram_svd(const StandardizedMatrix& x) {
  const Eigen::Index n = x.n();
  const Eigen::Index p = x.p();
  if (p <= n) {
    throw InvalidParameterError(
        "gram_svd is for the wide regime p > n; got n=" + std::to_string(n) +
        ", p=" + std::to_string(p));
  }
  const Eigen::Index m = rank_cap(n, p, x.axis);

  const Eigen::MatrixXd gram = x.values * x.values.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailureError("eigendecomposition of the Gram matrix failed");
  }

  SvdFactors f;
  f.n = n;
  f.p = p;
  f.axis = x.axis;
  f.d.resize(m);
  f.u.resize(n, m);
  // SelfAdjointEigenSolver returns ascending eigenvalues; take the top m in
  // descending order.
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index src = n - 1 - i;
    f.d(i) = std::sqrt(std::max(eig.eigenvalues()(src), 0.0));
    f.u.col(i) = eig.eigenvectors().col(src);
  }
  f.rank_tol = f.d(0) * kRankTolFactor;

  f.v.resize(p, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (f.d(i) >= f.rank_tol) {
      f.v.col(i).noalias() = x.values.transpose() * f.u.col(i) / f.d(i);
    } else {
      f.v.col(i).setZero();
    }
  }
  return f;
}

SvdFactors compute_svd(const StandardizedMatrix& x, double gram_ratio) {
  if (static_cast<double>(x.p()) > gram_ratio * static_cast<double>(x.n())) {
    return gram_svd(x);
  }
  return thin_svd(x);
}

}  // namespace ubva
