#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "ubva/svd.hpp"

namespace ubva {

// Raw right-singular severity per variable: SR_j = sum_i v_ji^2 d_i^4.
// Identity: sum_j SR_j = sum_i d_i^4 = sum_i SL_i.
Eigen::VectorXd compute_sr(const SvdFactors& f);

// Raw left-singular severity per observation: SL_i = sum_i' u_ii'^2 d_i'^4.
Eigen::VectorXd compute_sl(const SvdFactors& f);

// Per-variable bounds on the scaled severity sR_j = SR_j / (n-1)^2:
//   1 / sum_i v_ji^2  <=  sR_j  <=  d_1^2 / (n-1).
// For full-rank tall input (n > p) the lower bound is exactly 1.  If a row of
// V is numerically zero (sum v_ji^2 < 1e-12, possible only for degenerate
// rank-deficient input) the lower bound falls back to p.
struct SrBounds {
  Eigen::VectorXd lower;  // length p
  double upper = 0.0;
};
SrBounds sr_bounds(const SvdFactors& f);

// Detection threshold for elevated severity: (p-1)/(n-1) + 1, the expected
// scaled severity of a variable uncorrelated with all others.
double detection_threshold(Eigen::Index n, Eigen::Index p);

// Scaled severities plus bounds, threshold, and flags.  sR_j lives in [1, p]
// for column-standardized input; the mirrored sL_i = SL_i/(p-1)^2 lives in
// [1, n] in the row-standardized framing (for column-standardized input it is
// still reported, as a diagnostic score for observations, but the [1, n]
// range is only nominal).  `sl`/`sl_raw` are empty when not requested.
struct SeverityReport {
  Eigen::VectorXd sr;       // SR / (n-1)^2
  Eigen::VectorXd sr_raw;   // SR
  Eigen::VectorXd sl;       // SL / (p-1)^2
  Eigen::VectorXd sl_raw;   // SL
  Eigen::VectorXd lower;    // per-variable lower bound on sR
  double upper = 0.0;       // common upper bound on sR
  double threshold = 0.0;
  std::vector<std::uint8_t> flagged;  // sR_j > threshold
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Axis axis = Axis::kColumns;
};

// Assembles the full severity report from an SVD.
SeverityReport make_severity_report(const SvdFactors& f, bool with_sl = true);

// Expected scaled severity under X ~ N(0, Sigma) with i.i.d. rows:
//   E(sR_j) = [Sigma_jj tr(Sigma) + n Sigma_j' Sigma_j] / (n - 1).
// Exact for n > p; for n < p the same expression is returned with
// `low_rank_approximation` set (the severity then involves a rank-truncated
// spectrum and the identity is only approximate).
struct ExpectedSr {
  Eigen::VectorXd values;
  bool low_rank_approximation = false;
};
ExpectedSr expected_sr(const Eigen::MatrixXd& sigma, Eigen::Index n);

// Spectrum-derived weights used by the blended summary.  With lambda_i =
// d_i^2 (squared singular values of the standardized matrix):
//   w1 = energy fraction of components with d_i^2 > max(n-1, p),
//   w2 = reciprocal-energy fraction of components with d_i^2 > (sqrt n - sqrt p)^2,
// both with strict inequalities.  Inside the reciprocal sums d_i^2 is floored
// at d_1^2 * 1e-12 (the floor applies to the reciprocal only, not to the
// threshold test).
struct Weights {
  double w1 = 0.0;
  double w2 = 0.0;
};
Weights compute_weights(const SvdFactors& f);

// Summary multi-collinearity measures.
//   BsRs = (sum_j sR_j - p) / (p (p - 1))            in [0, 1]
//   LsRs = (sum_j sR_j - p) / (p (d_1^2/(n-1) - 1))  in [0, 1]
//   sRs  = BsRs (w1+w2)/2 + LsRs (1 - (w1+w2)/2)
//   red  = sqrt(BsRs)
// When the spectrum is degenerate (d_1^2 <= (n-1)(1 + 1e-12), i.e. the top
// eigenvalue does not exceed the orthogonal-design value) LsRs is defined as
// 0 rather than 0/0.
struct SummaryMeasures {
  double srs = 0.0;
  double bsrs = 0.0;
  double lsrs = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  double red = 0.0;
  double condition_number = 0.0;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
};
SummaryMeasures compute_summary(const Eigen::VectorXd& sr, const SvdFactors& f);

}  // namespace ubva
