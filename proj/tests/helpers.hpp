#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "ubva/rng.hpp"

namespace testutil {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index n, Eigen::Index p,
                                       std::uint64_t seed) {
  ubva::Rng rng(seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.next_gaussian();
  }
  return x;
}

// Pearson correlation computed from raw data with straight loops; an oracle
// independent of the library's standardization and SVD code paths.
inline double pearson_r(const Eigen::MatrixXd& x, Eigen::Index a,
                        Eigen::Index b) {
  const Eigen::Index n = x.rows();
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mean_a += x(i, a);
    mean_b += x(i, b);
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double da = x(i, a) - mean_a;
    const double db = x(i, b) - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

// Sum of squared correlations of variable j with every variable (self
// included), straight from raw data.
inline double r2_row_sum(const Eigen::MatrixXd& x, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double r = pearson_r(x, j, k);
    sum += r * r;
  }
  return sum;
}

// VIF oracle via explicit least squares: regress raw column j on all other
// columns plus an intercept, VIF_j = 1 / (1 - R^2).
inline double regression_vif(const Eigen::MatrixXd& x, Eigen::Index j) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd design(n, p);  // intercept + the other p-1 columns
  design.col(0).setOnes();
  Eigen::Index c = 1;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (k == j) continue;
    design.col(c++) = x.col(k);
  }
  const Eigen::VectorXd y = x.col(j);
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  const double rss = (y - design * beta).squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();
  return 1.0 / (rss / tss);
}

// Columns that are exactly orthogonal, mean-zero, and standardized: QR of a
// column-centered Gaussian matrix spans the centered space, so its Q columns
// have zero mean; scaling by sqrt(n-1) gives unit sample variance.
inline Eigen::MatrixXd orthogonal_standardized(Eigen::Index n, Eigen::Index p,
                                               std::uint64_t seed) {
  Eigen::MatrixXd x = gaussian_matrix(n, p, seed);
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ() *
      Eigen::MatrixXd::Identity(n, p);
  return std::sqrt(static_cast<double>(n - 1)) * q;
}

inline Eigen::MatrixXd identical_columns(Eigen::Index n, Eigen::Index p,
                                         std::uint64_t seed) {
  const Eigen::MatrixXd base = gaussian_matrix(n, 1, seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) x.col(j) = base.col(0);
  return x;
}

// Kolmogorov-Smirnov distance between the empirical CDFs of two samples.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
    const double fa = static_cast<double>(ia) / static_cast<double>(a.size());
    const double fb = static_cast<double>(ib) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Standard normal quantile via bisection on erfc (oracle-quality, slow).
inline double inverse_normal_cdf(double prob) {
  double lo = -10.0;
  double hi = 10.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    if (cdf < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// RAII temporary directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ubva_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace testutil
