#include "ubva/mvn.hpp"

#include <cmath>
#include <string>

#include "ubva/errors.hpp"

namespace ubva {

MvnSampler::MvnSampler(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) {
    throw InvalidParameterError("covariance matrix must be square");
  }
  if (sigma.rows() < 1) {
    throw InvalidParameterError("covariance dimension must be positive");
  }
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    throw NotSymmetricError(
        "covariance matrix is not symmetric (max |Sigma - Sigma'| = " +
        std::to_string(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailureError("covariance eigendecomposition failed");
  }
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -1e-8) {
    throw NotPsdError("covariance matrix is not positive semi-definite "
                      "(minimum eigenvalue " +
                      std::to_string(min_eig) + ")");
  }

  const Eigen::VectorXd root =
      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  factor_ = eig.eigenvectors() * root.asDiagonal();
}

Eigen::MatrixXd MvnSampler::sample(Eigen::Index n, Rng& rng) const {
  if (n < 1) {
    throw InvalidParameterError("sample size must be positive");
  }
  const Eigen::Index p = dim();
  Eigen::MatrixXd z(n, p);
  // Row-major fill order is part of the frozen sampling contract.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = rng.next_gaussian();
  }
  return z * factor_.transpose();
}

Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& sigma, Eigen::Index n,
                           std::uint64_t seed) {
  return MvnSampler(sigma).sample(n, seed);
}

}  // namespace ubva
