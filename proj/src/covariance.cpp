#include "ubva/covariance.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ubva/errors.hpp"
#include "ubva/rng.hpp"

namespace ubva {

namespace {

void check_cs_rho(double rho, Eigen::Index size, const std::string& where) {
  const double lower =
      size > 1 ? -1.0 / static_cast<double>(size - 1) : -1.0;
  if (!(rho > lower && rho < 1.0)) {
    std::ostringstream msg;
    msg << where << ": compound-symmetry rho must lie in (" << lower
        << ", 1) for " << size << " variables; got " << rho;
    throw InvalidParameterError(msg.str());
  }
}

Eigen::MatrixXd realize_cs(Eigen::Index p, double rho) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(p, p, rho);
  sigma.diagonal().setOnes();
  return sigma;
}

Eigen::MatrixXd realize_spiked(Eigen::Index p, const CovarianceSpec::Spiked& s) {
  if (s.k < 1 || s.k > p) {
    throw InvalidParameterError("spiked structure requires 1 <= k <= p; got k=" +
                                std::to_string(s.k));
  }
  if (!(s.zeta2 >= 0.0 && s.zeta2 < 1.0)) {
    throw InvalidParameterError("spiked noise variance zeta2 must lie in "
                                "[0, 1); got " +
                                std::to_string(s.zeta2));
  }
  if (s.equal_o2.has_value() == s.ok2.has_value()) {
    throw InvalidParameterError(
        "spiked structure needs exactly one of equal_o2 / ok2");
  }

  Eigen::VectorXd o2(s.k);
  if (s.equal_o2.has_value()) {
    if (!(*s.equal_o2 > 0.0)) {
      throw InvalidParameterError("spike strength equal_o2 must be positive");
    }
    o2.setConstant(*s.equal_o2);
  } else {
    o2 = solve_spike_decay(s.k, s.zeta2, p, *s.ok2).o2;
  }

  // Orthonormal spike basis from a seeded Gaussian p x k matrix.
  Rng rng(s.basis_seed);
  Eigen::MatrixXd z(p, s.k);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < s.k; ++j) z(i, j) = rng.next_gaussian();
  }
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ() *
      Eigen::MatrixXd::Identity(p, s.k);

  Eigen::MatrixXd sigma = q * o2.asDiagonal() * q.transpose();
  sigma.diagonal().array() += s.zeta2;
  // Exact symmetry despite floating-point products.
  return (sigma + sigma.transpose()) / 2.0;
}

}  // namespace

SpikeDecay solve_spike_decay(int k, double zeta2, Eigen::Index p, double ok2) {
  if (k < 1) {
    throw InvalidParameterError("spike count k must be at least 1");
  }
  if (!(zeta2 >= 0.0 && zeta2 < 1.0)) {
    throw InvalidParameterError("zeta2 must lie in [0, 1)");
  }
  if (!(ok2 > 0.0)) {
    throw InvalidParameterError("smallest spike ok2 must be positive");
  }

  const double target = static_cast<double>(p) * (1.0 - zeta2);
  const double flat_sum = static_cast<double>(k) * ok2;
  const double tol = 1e-12 * std::max(1.0, target);

  if (target < flat_sum - tol) {
    std::ostringstream msg;
    msg << "spike profile infeasible: total spike variance p(1-zeta2)=" << target
        << " is below the flat minimum k*ok2=" << flat_sum;
    throw InfeasibleError(msg.str());
  }

  SpikeDecay out;
  out.o2.resize(k);
  if (target <= flat_sum + tol) {
    out.o2.setConstant(ok2);
    out.flat = true;
    return out;
  }

  // o_i^2 = ok2 * c^{i-k} for i = 1..k.  The total S(c) = ok2 * sum_{m=0}^{k-1}
  // c^{-m} decreases from +inf (c -> 0) to k*ok2 (c = 1), so bisect on c.
  const auto total = [&](double c) {
    double sum = 0.0;
    double term = ok2;  // ok2 * c^{-m}, starting at m = 0
    for (int m = 0; m < k; ++m) {
      sum += term;
      term /= c;
    }
    return sum;
  };

  double lo = 1e-16;  // total(lo) > target
  double hi = 1.0;    // total(hi) = k*ok2 < target
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-16; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double c = 0.5 * (lo + hi);
  for (int i = 0; i < k; ++i) {
    out.o2(i) = ok2 * std::pow(c, static_cast<double>(i + 1 - k));
  }
  return out;
}

Eigen::MatrixXd realize_covariance(const CovarianceSpec& spec) {
  const Eigen::Index p = spec.p;
  if (p < 1) {
    throw InvalidParameterError("covariance dimension p must be positive");
  }

  return std::visit(
      [&](const auto& kind) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, CovarianceSpec::Identity>) {
          return Eigen::MatrixXd::Identity(p, p);
        } else if constexpr (std::is_same_v<T,
                                            CovarianceSpec::CompoundSymmetric>) {
          check_cs_rho(kind.rho, p, "compound symmetry");
          return realize_cs(p, kind.rho);
        } else if constexpr (std::is_same_v<T, CovarianceSpec::Ar1>) {
          if (!(kind.rho > -1.0 && kind.rho < 1.0)) {
            throw InvalidParameterError(
                "AR(1) rho must lie in (-1, 1); got " +
                std::to_string(kind.rho));
          }
          Eigen::MatrixXd sigma(p, p);
          for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) {
              sigma(i, j) = std::pow(kind.rho, std::abs(double(i - j)));
            }
          }
          return sigma;
        } else if constexpr (std::is_same_v<T, CovarianceSpec::BlockCs>) {
          Eigen::Index total = 0;
          for (const auto& [size, rho] : kind.blocks) {
            if (size < 1) {
              throw InvalidParameterError("block sizes must be positive");
            }
            check_cs_rho(rho, size, "block");
            total += size;
          }
          if (total != p) {
            throw InvalidParameterError(
                "block sizes sum to " + std::to_string(total) +
                " but p=" + std::to_string(p));
          }
          Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(p, p);
          Eigen::Index offset = 0;
          for (const auto& [size, rho] : kind.blocks) {
            sigma.block(offset, offset, size, size) = realize_cs(size, rho);
            offset += size;
          }
          return sigma;
        } else {
          static_assert(std::is_same_v<T, CovarianceSpec::Spiked>);
          return realize_spiked(p, kind);
        }
      },
      spec.kind);
}

std::string CovarianceSpec::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Identity>) {
          out << "identity";
        } else if constexpr (std::is_same_v<T, CompoundSymmetric>) {
          out << "compound symmetry (rho=" << kind.rho << ")";
        } else if constexpr (std::is_same_v<T, Ar1>) {
          out << "AR(1) (rho=" << kind.rho << ")";
        } else if constexpr (std::is_same_v<T, BlockCs>) {
          out << "blocks:";
          for (const auto& [size, rho] : kind.blocks) {
            out << " " << size << "@" << rho;
          }
        } else {
          static_assert(std::is_same_v<T, Spiked>);
          out << "spiked (k=" << kind.k << ", zeta2=" << kind.zeta2;
          if (kind.equal_o2.has_value()) {
            out << ", equal o2=" << *kind.equal_o2;
          } else {
            out << ", decay to ok2=" << *kind.ok2;
          }
          out << ", basis_seed=" << kind.basis_seed << ")";
        }
      },
      kind);
  return out.str();
}

}  // namespace ubva
