#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "ubva/rng.hpp"

namespace ubva {

// Multivariate-normal sampler with i.i.d. N(0, Sigma) rows.  The transform is
// the symmetric eigendecomposition factor Q diag(sqrt(max(lambda, 0))): unlike
// Cholesky it accepts singular covariances (e.g. perfectly correlated pairs).
// Construction validates symmetry (NotSymmetric) and PSD-ness up to
// eigenvalue tolerance -1e-8 (NotPSD); negative eigenvalues above the
// tolerance are clamped to zero.
//
// Sampling fills an n x p standard-normal matrix Z row by row from the given
// generator and returns Z F'; the draw is therefore fully determined by
// (Sigma, n, seed).  Constructing the sampler once and drawing with many
// seeds amortizes the O(p^3) factorization.
class MvnSampler {
 public:
  explicit MvnSampler(const Eigen::MatrixXd& sigma);

  Eigen::Index dim() const { return factor_.rows(); }

  Eigen::MatrixXd sample(Eigen::Index n, Rng& rng) const;

  Eigen::MatrixXd sample(Eigen::Index n, std::uint64_t seed) const {
    Rng rng(seed);
    return sample(n, rng);
  }

 private:
  Eigen::MatrixXd factor_;  // p x p
};

// One-shot convenience wrapper.
Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& sigma, Eigen::Index n,
                           std::uint64_t seed);

}  // namespace ubva
