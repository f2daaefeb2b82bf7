#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ubva/baselines.hpp"
#include "ubva/covariance.hpp"
#include "ubva/severity.hpp"

namespace ubva {

// Built-in covariance scenarios.
//
// Structures (letters):
//   A  identity
//   B  compound symmetry, default rho = 0.2
//   C  AR(1), default rho = 0.8 (use --rho 0.3 for the mild preset)
//   D  blocks: p/2 variables at rho 0.1, p/4 at 0.4, remainder at 0.6
//   E  spiked, k equal spikes of strength o^2 = 10/n, zeta^2 = 0.4
//   F  spiked, geometric decay down to o_k^2 = 2 + zeta^2
//
// Numbered scenarios:
//   1  identity
//   2  one near-collinear pair (rho = 0.99), all else independent
//   3  compound symmetry, default rho = 0.3
//   4  near-collinear pair (0.99) embedded in compound symmetry (0.3)
//   5  spiked, geometric decay down to o_k^2 = 1 + zeta^2
struct ScenarioParams {
  std::string id;  // "A".."F" or "1".."5"
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::uint64_t seed = 0;
  std::optional<double> rho;   // correlation override where applicable
  double zeta2 = 0.4;          // spiked-noise variance
  int k_spikes = 10;           // number of spikes
  std::optional<double> ok2;   // smallest-spike override
  std::uint64_t basis_seed = 42;  // spike-basis seed
};

// Resolves a scenario id (with parameter overrides) to a covariance spec.
// Unknown ids raise InvalidParameter.
CovarianceSpec scenario_covariance(const ScenarioParams& params);

struct ScenarioReport {
  ScenarioParams params;
  std::string structure;           // human-readable covariance description
  SeverityReport severity;
  SummaryMeasures summary;
  Eigen::VectorXd eigenvalues;     // sample eigenvalues d_i^2 / (n-1)
};

// Realizes the covariance, draws one seeded MVN sample (RNG stream derived
// from (seed, "scenario:<id>")), standardizes columns, and computes the full
// measure set.  Identical (id, n, p, seed, overrides) produce identical
// reports.
ScenarioReport run_scenario(const ScenarioParams& params);

// Writes summary.json, severity.tsv, eigenvalues.tsv and manifest.json into
// `dir` (created if needed).  Files are complete-at-rename: content is
// composed in memory, written to a temporary, and atomically renamed.
void write_scenario_report(const ScenarioReport& report,
                           const std::filesystem::path& dir);

}  // namespace ubva
