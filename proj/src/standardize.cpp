#include "ubva/standardize.hpp"

#include <string>

#include "ubva/errors.hpp"

namespace ubva {

namespace {

StandardizedMatrix standardize_columns(const Eigen::MatrixXd& x,
                                       const char* vector_word) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();

  StandardizedMatrix out;
  out.axis = Axis::kColumns;
  out.center = x.colwise().mean();
  out.scale.resize(p);

  Eigen::MatrixXd centered = x.rowwise() - out.center.transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    // Exact constancy test: a column with max == min has zero spread, and a
    // column with max != min always has strictly positive sum of squared
    // deviations, so the two tests agree.
    if (x.col(j).maxCoeff() == x.col(j).minCoeff()) {
      throw ConstantVectorError(static_cast<std::size_t>(j), vector_word);
    }
    const double variance =
        centered.col(j).squaredNorm() / static_cast<double>(n - 1);
    out.scale(j) = std::sqrt(variance);
    centered.col(j) /= out.scale(j);
  }
  out.values = std::move(centered);
  return out;
}

}  // namespace

StandardizedMatrix standardize(const Eigen::MatrixXd& x, Axis axis) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();

  if (axis == Axis::kColumns) {
    if (n < 3 || p < 2) {
      throw DimensionTooSmallError(
          "column standardization requires n >= 3 samples and p >= 2 "
          "variables; got n=" +
          std::to_string(n) + ", p=" + std::to_string(p));
    }
    return standardize_columns(x, "column");
  }

  if (p < 3 || n < 2) {
    throw DimensionTooSmallError(
        "row standardization requires p >= 3 variables and n >= 2 samples; "
        "got n=" +
        std::to_string(n) + ", p=" + std::to_string(p));
  }
  StandardizedMatrix t = standardize_columns(x.transpose(), "row");
  StandardizedMatrix out;
  out.values = t.values.transpose();
  out.axis = Axis::kRows;
  out.center = std::move(t.center);
  out.scale = std::move(t.scale);
  return out;
}

Eigen::VectorXd correlation_row(const StandardizedMatrix& x, Eigen::Index j) {
  if (x.axis != Axis::kColumns) {
    throw InvalidParameterError(
        "correlation_row requires a column-standardized matrix");
  }
  if (j < 0 || j >= x.p()) {
    throw IndexOutOfRangeError("variable index " + std::to_string(j) +
                               " out of range [0, " + std::to_string(x.p()) +
                               ")");
  }
  return x.values.transpose() * x.values.col(j) /
         static_cast<double>(x.n() - 1);
}

Eigen::MatrixXd correlation_matrix(const StandardizedMatrix& x) {
  if (x.axis != Axis::kColumns) {
    throw InvalidParameterError(
        "correlation_matrix requires a column-standardized matrix");
  }
  return x.values.transpose() * x.values / static_cast<double>(x.n() - 1);
}

}  // namespace ubva
