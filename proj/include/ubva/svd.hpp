#pragma once

#include <Eigen/Dense>

#include "ubva/standardize.hpp"

namespace ubva {

// Thin SVD of a standardized matrix, truncated to the structural rank cap
// m = min(n-1, p) for column-standardized input (standardizing removes one
// degree of freedom per column) and m = min(n, p-1) for row-standardized
// input.  Singular values are descending; sum(d^2) equals (n-1)p for
// column-standardized input and n(p-1) for row-standardized input.
struct SvdFactors {
  Eigen::VectorXd d;   // length m, descending
  Eigen::MatrixXd u;   // n x m
  Eigen::MatrixXd v;   // p x m
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Axis axis = Axis::kColumns;
  double rank_tol = 0.0;  // d(0) * 1e-12

  Eigen::Index m() const { return d.size(); }

  // Number of singular values at or above rank_tol; values below it are
  // treated as exact zeros in rank accounting.
  Eigen::Index rank() const {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) >= rank_tol) ++r;
    }
    return r;
  }

  double sum_d2() const { return d.squaredNorm(); }
};

inline constexpr double kRankTolFactor = 1e-12;

// Dense thin SVD (divide-and-conquer).  Suitable whenever n and p are of the
// same order.
SvdFactors thin_svd(const StandardizedMatrix& x);

// Gram-matrix route for the wide regime p > n: eigendecompose X X' (n x n),
// then recover V = X' U D^{-1}.  Columns of V whose singular value falls
// below rank_tol are zeroed; downstream consumers must handle rank < m.
SvdFactors gram_svd(const StandardizedMatrix& x);

// Dispatcher: takes the Gram route when p > gram_ratio * n, the dense thin
// SVD otherwise.
SvdFactors compute_svd(const StandardizedMatrix& x, double gram_ratio = 4.0);

}  // namespace ubva
