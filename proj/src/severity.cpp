#include "ubva/severity.hpp"

#include <cmath>
#include <string>

#include "ubva/baselines.hpp"
#include "ubva/errors.hpp"

namespace ubva {

namespace {

Eigen::VectorXd weighted_row_sums(const Eigen::MatrixXd& basis,
                                  const Eigen::VectorXd& d4) {
  return basis.array().square().matrix() * d4;
}

}  // namespace

Eigen::VectorXd compute_sr(const SvdFactors& f) {
  const Eigen::VectorXd d4 = f.d.array().pow(4).matrix();
  return weighted_row_sums(f.v, d4);
}

Eigen::VectorXd compute_sl(const SvdFactors& f) {
  const Eigen::VectorXd d4 = f.d.array().pow(4).matrix();
  return weighted_row_sums(f.u, d4);
}

SrBounds sr_bounds(const SvdFactors& f) {
  SrBounds bounds;
  const double n1 = static_cast<double>(f.n - 1);
  bounds.upper = f.d(0) * f.d(0) / n1;
  bounds.lower.resize(f.p);
  for (Eigen::Index j = 0; j < f.p; ++j) {
    const double row_ss = f.v.row(j).squaredNorm();
    // A numerically zero row of V can only arise from degenerate rank
    // deficiency; the Cauchy-Schwarz bound is vacuous there, so fall back to
    // the trivial bound p.
    bounds.lower(j) =
        row_ss < 1e-12 ? static_cast<double>(f.p) : 1.0 / row_ss;
  }
  return bounds;
}

double detection_threshold(Eigen::Index n, Eigen::Index p) {
  return static_cast<double>(p - 1) / static_cast<double>(n - 1) + 1.0;
}

SeverityReport make_severity_report(const SvdFactors& f, bool with_sl) {
  SeverityReport report;
  report.n = f.n;
  report.p = f.p;
  report.axis = f.axis;

  const double n1sq = static_cast<double>(f.n - 1) * static_cast<double>(f.n - 1);
  report.sr_raw = compute_sr(f);
  report.sr = report.sr_raw / n1sq;

  if (with_sl) {
    const double p1sq =
        static_cast<double>(f.p - 1) * static_cast<double>(f.p - 1);
    report.sl_raw = compute_sl(f);
    report.sl = report.sl_raw / p1sq;
  }

  const SrBounds bounds = sr_bounds(f);
  report.lower = bounds.lower;
  report.upper = bounds.upper;

  report.threshold = detection_threshold(f.n, f.p);
  report.flagged.resize(static_cast<std::size_t>(f.p));
  for (Eigen::Index j = 0; j < f.p; ++j) {
    report.flagged[static_cast<std::size_t>(j)] =
        report.sr(j) > report.threshold ? 1 : 0;
  }
  return report;
}

ExpectedSr expected_sr(const Eigen::MatrixXd& sigma, Eigen::Index n) {
  if (sigma.rows() != sigma.cols()) {
    throw InvalidParameterError("covariance matrix must be square");
  }
  const Eigen::Index p = sigma.rows();
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    throw NotSymmetricError("covariance matrix is not symmetric (max |Sigma - "
                            "Sigma'| = " +
                            std::to_string(asym) + ")");
  }
  if (n < 2) {
    throw DimensionTooSmallError("expected severity requires n >= 2");
  }

  ExpectedSr out;
  out.low_rank_approximation = n < p;
  const double trace = sigma.trace();
  const double nd = static_cast<double>(n);
  out.values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double col_ss = sigma.col(j).squaredNorm();
    // E(SR_j) = (n-1) Sigma_jj tr(Sigma) + n (n-1) Sigma_j' Sigma_j, scaled
    // by (n-1)^2.
    out.values(j) = (sigma(j, j) * trace + nd * col_ss) / (nd - 1.0);
  }
  return out;
}

Weights compute_weights(const SvdFactors& f) {
  const Eigen::ArrayXd d2 = f.d.array().square();
  const double t1 =
      std::max(static_cast<double>(f.n - 1), static_cast<double>(f.p));
  const double sqrt_gap =
      std::sqrt(static_cast<double>(f.n)) - std::sqrt(static_cast<double>(f.p));
  const double t2 = sqrt_gap * sqrt_gap;
  const double floor = d2(0) * 1e-12;

  double energy_above = 0.0;
  double energy_total = 0.0;
  double recip_above = 0.0;
  double recip_total = 0.0;
  for (Eigen::Index i = 0; i < d2.size(); ++i) {
    energy_total += d2(i);
    if (d2(i) > t1) energy_above += d2(i);
    // The floor only protects the reciprocal; threshold tests use the actual
    // value.
    const double recip = 1.0 / std::max(d2(i), floor);
    recip_total += recip;
    if (d2(i) > t2) recip_above += recip;
  }

  Weights w;
  w.w1 = energy_above / energy_total;
  w.w2 = recip_above / recip_total;
  return w;
}

SummaryMeasures compute_summary(const Eigen::VectorXd& sr,
                                const SvdFactors& f) {
  if (sr.size() != f.p) {
    throw InvalidParameterError("severity vector length does not match p");
  }
  SummaryMeasures s;
  s.n = f.n;
  s.p = f.p;

  const double pd = static_cast<double>(f.p);
  const double n1 = static_cast<double>(f.n - 1);
  const double excess = sr.sum() - pd;

  s.bsrs = excess / (pd * (pd - 1.0));

  const double lambda_max = f.d(0) * f.d(0) / n1;
  // Degenerate spectrum: the top sample eigenvalue does not exceed the
  // orthogonal-design value, so the localized normalizer vanishes.
  if (f.d(0) * f.d(0) <= n1 * (1.0 + 1e-12)) {
    s.lsrs = 0.0;
  } else {
    s.lsrs = excess / (pd * (lambda_max - 1.0));
  }

  const Weights w = compute_weights(f);
  s.w1 = w.w1;
  s.w2 = w.w2;
  const double blend = 0.5 * (w.w1 + w.w2);
  s.srs = s.bsrs * blend + s.lsrs * (1.0 - blend);

  s.red = std::sqrt(std::max(s.bsrs, 0.0));
  s.condition_number = condition_number(f);
  return s;
}

}  // namespace ubva
