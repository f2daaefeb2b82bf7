#include "ubva/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ubva/errors.hpp"

namespace ubva {

Eigen::VectorXd vif(const SvdFactors& f) {
  if (f.n <= f.p) {
    throw RegimeError(
        "VIF requires the data-rich regime n > p (the correlation matrix "
        "must be invertible); got n=" +
        std::to_string(f.n) + ", p=" + std::to_string(f.p));
  }
  const double d_min = f.d(f.m() - 1);
  if (d_min < f.d(0) * 1e-10) {
    throw RankDeficientError(
        "correlation matrix is numerically singular (d_min/d_1 = " +
        std::to_string(d_min / f.d(0)) + "); VIF is undefined");
  }
  // diag(R^{-1}) through the SVD: VIF_j = (n-1) sum_i v_ji^2 / d_i^2.
  const Eigen::VectorXd inv_d2 = f.d.array().square().inverse().matrix();
  return static_cast<double>(f.n - 1) *
         (f.v.array().square().matrix() * inv_d2);
}

double condition_number(const SvdFactors& f) {
  const double d_min = f.d(f.m() - 1);
  if (d_min < f.rank_tol) {
    return std::numeric_limits<double>::infinity();
  }
  return f.d(0) / d_min;
}

ConditionIndices condition_indices(const SvdFactors& f, double cutoff) {
  ConditionIndices out;
  out.cutoff = cutoff;
  out.values.resize(f.m());
  for (Eigen::Index i = 0; i < f.m(); ++i) {
    out.values(i) = f.d(i) < f.rank_tol
                        ? std::numeric_limits<double>::infinity()
                        : f.d(0) / f.d(i);
    if (out.values(i) > cutoff) ++out.n_above;
  }
  return out;
}

double red(const Eigen::VectorXd& sr) {
  const double pd = static_cast<double>(sr.size());
  if (sr.size() < 2) {
    throw DimensionTooSmallError("red requires at least 2 variables");
  }
  const double bsrs = (sr.sum() - pd) / (pd * (pd - 1.0));
  return std::sqrt(std::max(bsrs, 0.0));
}

namespace {

// Shared windowed-r^2 walker: calls visit(j, r2) for every pair within the
// window, including the self pair (r2 exactly 1).
template <typename Visit>
void for_windowed_r2(const StandardizedMatrix& x, Eigen::Index window,
                     Visit visit) {
  if (x.axis != Axis::kColumns) {
    throw InvalidParameterError("LD sums require a column-standardized matrix");
  }
  if (window < 0) {
    throw InvalidParameterError("window must be non-negative");
  }
  const Eigen::Index p = x.p();
  const double n1 = static_cast<double>(x.n() - 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, j - window);
    const Eigen::Index hi = std::min<Eigen::Index>(p - 1, j + window);
    for (Eigen::Index k = lo; k <= hi; ++k) {
      if (k == j) {
        visit(j, 1.0);
        continue;
      }
      const double r = x.values.col(j).dot(x.values.col(k)) / n1;
      visit(j, r * r);
    }
  }
}

}  // namespace

Eigen::VectorXd ld_adj(const StandardizedMatrix& x, Eigen::Index window) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.p());
  for_windowed_r2(x, window,
                  [&](Eigen::Index j, double r2) { out(j) += r2; });
  return out;
}

Eigen::VectorXd ld_score(const StandardizedMatrix& x, Eigen::Index window) {
  const double n2 = static_cast<double>(x.n() - 2);
  if (x.n() < 3) {
    throw DimensionTooSmallError("ld_score requires n >= 3");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.p());
  for_windowed_r2(x, window, [&](Eigen::Index j, double r2) {
    out(j) += r2 - (1.0 - r2) / n2;
  });
  return out;
}

EffectiveCounts effective_counts(const Eigen::VectorXd& sr,
                                 const std::optional<Eigen::VectorXd>& sl_row,
                                 Eigen::Index n, Eigen::Index p) {
  if (sr.size() != p) {
    throw InvalidParameterError("severity vector length does not match p");
  }
  EffectiveCounts out;
  const double pd = static_cast<double>(p);
  out.p_eff = pd * pd / sr.sum();
  out.max_p_eff = sr.array().inverse().sum();
  if (sl_row.has_value()) {
    if (sl_row->size() != n) {
      throw InvalidParameterError(
          "left severity vector length does not match n");
    }
    const double nd = static_cast<double>(n);
    out.n_eff = nd * nd / sl_row->sum();
    out.max_n_eff = sl_row->array().inverse().sum();
  }
  return out;
}

}  // namespace ubva
