#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ubva {

// Population covariance (correlation) structures for the simulation lab.
// All realized matrices are symmetric PSD; identity / compound-symmetry /
// AR(1) / block structures have exact unit diagonals.  Spiked structures
// (L L' + zeta^2 I with L = Q diag(o)) have trace p(1-zeta^2) + p zeta^2 only
// in expectation of construction and a non-constant diagonal; they are
// validated for symmetry and PSD-ness only.
struct CovarianceSpec {
  struct Identity {};

  struct CompoundSymmetric {
    double rho = 0.0;  // valid range (-1/(p-1), 1)
  };

  struct Ar1 {
    double rho = 0.0;  // valid range (-1, 1)
  };

  struct BlockCs {
    // (block size, within-block rho); sizes must sum to p.
    std::vector<std::pair<Eigen::Index, double>> blocks;
  };

  struct Spiked {
    int k = 1;            // number of spikes, 1 <= k <= p
    double zeta2 = 0.0;   // noise variance, in [0, 1)
    // Exactly one of the two below:
    std::optional<double> equal_o2;  // all spikes share this strength
    std::optional<double> ok2;       // smallest spike; geometric decay solved
                                     // so that sum o_i^2 = p (1 - zeta2)
    std::uint64_t basis_seed = 42;   // seeds the orthonormal spike basis Q
  };

  using Kind = std::variant<Identity, CompoundSymmetric, Ar1, BlockCs, Spiked>;

  Eigen::Index p = 0;
  Kind kind = Identity{};

  // Human-readable structure description, e.g. "compound symmetry (rho=0.2)".
  std::string describe() const;
};

// Geometric spike-strength profile: o_i^2 = a c^i with a c^k = ok2 and
// sum_i o_i^2 = p (1 - zeta2), solved for c in (0, 1) by bisection.
// Feasible iff p (1 - zeta2) > k * ok2; at equality the profile is flat
// (all o_i^2 = ok2) and `flat` is set; below it Infeasible is thrown.
struct SpikeDecay {
  Eigen::VectorXd o2;  // length k, descending
  bool flat = false;
};
SpikeDecay solve_spike_decay(int k, double zeta2, Eigen::Index p, double ok2);

// Materializes the p x p covariance matrix.  Parameter violations raise
// InvalidParameter (or Infeasible for an unsatisfiable spike profile).
Eigen::MatrixXd realize_covariance(const CovarianceSpec& spec);

}  // namespace ubva
