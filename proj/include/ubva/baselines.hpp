#pragma once

#include <Eigen/Dense>

#include <optional>

#include "ubva/standardize.hpp"
#include "ubva/svd.hpp"

namespace ubva {

enum class Regime { kDataRich, kHighDim };

inline Regime regime_for(Eigen::Index n, Eigen::Index p) {
  return n > p ? Regime::kDataRich : Regime::kHighDim;
}

// Variance inflation factors via the SVD: VIF_j = (n-1) sum_i v_ji^2 / d_i^2,
// the diagonal of the inverse correlation matrix.  Data-rich only: requires
// n > p (RegimeError otherwise) and a numerically invertible spectrum
// (RankDeficient when d_p < d_1 * 1e-10).
Eigen::VectorXd vif(const SvdFactors& f);

// Condition number of the standardized matrix: d_1 / d_m with m = p in the
// data-rich regime and m = n-1 in the high-dimensional regime (the smallest
// structurally nonzero singular value).  Returns +infinity when d_m falls
// below rank_tol.
double condition_number(const SvdFactors& f);

// Condition indices d_1 / d_i for every retained singular value, plus the
// count above the conventional collinearity cutoff (default 30).  Indices
// whose d_i is below rank_tol are reported as +infinity.
struct ConditionIndices {
  Eigen::VectorXd values;
  double cutoff = 30.0;
  Eigen::Index n_above = 0;
};
ConditionIndices condition_indices(const SvdFactors& f, double cutoff = 30.0);

// Red(undancy) index: sqrt((sum_j sR_j - p) / (p (p - 1))), i.e. sqrt(BsRs);
// equals the root-mean-square off-diagonal correlation.
double red(const Eigen::VectorXd& sr);

// Windowed linkage-disequilibrium sums over a column-standardized matrix:
//   ld_adj_j   = sum_{|j'-j| <= t} r_{jj'}^2                (includes j itself)
//   ld_score_j = sum_{|j'-j| <= t} [r^2 - (1 - r^2)/(n-2)]  (bias-adjusted)
// ld_adj_j lies in [1, min(2t+1, p)].
Eigen::VectorXd ld_adj(const StandardizedMatrix& x, Eigen::Index window);
Eigen::VectorXd ld_score(const StandardizedMatrix& x, Eigen::Index window);

// Effective counts.  From column-standardized severities:
//   p_eff = p^2 / sum_j sR_j,  max_p_eff = sum_j 1/sR_j,
// with 1 <= p_eff <= max_p_eff <= n-1.  When scaled left severities from a
// row-standardized pass are supplied, the mirrored n_eff = n^2 / sum_i sL_i
// and max_n_eff = sum_i 1/sL_i are filled in as well.
struct EffectiveCounts {
  double p_eff = 0.0;
  double max_p_eff = 0.0;
  std::optional<double> n_eff;
  std::optional<double> max_n_eff;
};
EffectiveCounts effective_counts(const Eigen::VectorXd& sr,
                                 const std::optional<Eigen::VectorXd>& sl_row,
                                 Eigen::Index n, Eigen::Index p);

}  // namespace ubva
