#pragma once

#include <Eigen/Dense>

namespace ubva {

enum class Axis { kColumns, kRows };

// A matrix whose vectors along `axis` have sample mean 0 and sample variance
// 1 (variance denominator n-1 for columns, p-1 for rows).  `center` / `scale`
// hold the removed means and standard deviations (length p for columns,
// length n for rows).
struct StandardizedMatrix {
  Eigen::MatrixXd values;
  Axis axis = Axis::kColumns;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index p() const { return values.cols(); }
};

// Standardizes along the requested axis.  Requires at least 3 entries per
// standardized vector and at least 2 vectors (DimensionTooSmall otherwise);
// a constant vector raises ConstantVector with the offending index.
StandardizedMatrix standardize(const Eigen::MatrixXd& x,
                               Axis axis = Axis::kColumns);

// Row j of the sample correlation matrix of a column-standardized input:
// r_{j j'} = x_j' . x_{j'} / (n - 1).  The j-th entry is exactly the
// normalized self-product (1 up to rounding).
Eigen::VectorXd correlation_row(const StandardizedMatrix& x, Eigen::Index j);

// Full p x p sample correlation matrix X'X/(n-1) of a column-standardized
// input.  Intended for small p (tests, VIF-style diagnostics).
Eigen::MatrixXd correlation_matrix(const StandardizedMatrix& x);

}  // namespace ubva
