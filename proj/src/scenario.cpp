#include "ubva/scenario.hpp"

#include <string>
#include <utility>
#include <vector>

#include "ubva/errors.hpp"
#include "ubva/matrix_io.hpp"
#include "ubva/mvn.hpp"
#include "ubva/report_io.hpp"
#include "ubva/rng.hpp"
#include "ubva/version.hpp"

namespace ubva {

CovarianceSpec scenario_covariance(const ScenarioParams& params) {
  CovarianceSpec spec;
  spec.p = params.p;
  const std::string& id = params.id;
  const Eigen::Index p = params.p;

  const auto spiked = [&](double default_ok2) {
    CovarianceSpec::Spiked s;
    s.k = params.k_spikes;
    s.zeta2 = params.zeta2;
    s.ok2 = params.ok2.value_or(default_ok2);
    s.basis_seed = params.basis_seed;
    return s;
  };
  const auto pair_blocks = [&](double background_rho) {
    if (p < 3) {
      throw InvalidParameterError("scenario '" + id + "' requires p >= 3");
    }
    CovarianceSpec::BlockCs b;
    b.blocks = {{2, 0.99}, {p - 2, background_rho}};
    return b;
  };

  if (id == "A" || id == "1") {
    spec.kind = CovarianceSpec::Identity{};
  } else if (id == "B") {
    spec.kind = CovarianceSpec::CompoundSymmetric{params.rho.value_or(0.2)};
  } else if (id == "C") {
    spec.kind = CovarianceSpec::Ar1{params.rho.value_or(0.8)};
  } else if (id == "D") {
    if (p < 4) {
      throw InvalidParameterError("structure D requires p >= 4");
    }
    CovarianceSpec::BlockCs b;
    const Eigen::Index half = p / 2;
    const Eigen::Index quarter = p / 4;
    b.blocks = {{half, 0.1}, {quarter, 0.4}, {p - half - quarter, 0.6}};
    spec.kind = std::move(b);
  } else if (id == "E") {
    if (params.n < 1) {
      throw InvalidParameterError("structure E requires n (spike strength is "
                                  "10/n)");
    }
    CovarianceSpec::Spiked s;
    s.k = params.k_spikes;
    s.zeta2 = params.zeta2;
    s.equal_o2 = 10.0 / static_cast<double>(params.n);
    s.basis_seed = params.basis_seed;
    spec.kind = std::move(s);
  } else if (id == "F") {
    spec.kind = spiked(2.0 + params.zeta2);
  } else if (id == "2") {
    spec.kind = pair_blocks(0.0);
  } else if (id == "3") {
    spec.kind = CovarianceSpec::CompoundSymmetric{params.rho.value_or(0.3)};
  } else if (id == "4") {
    spec.kind = pair_blocks(params.rho.value_or(0.3));
  } else if (id == "5") {
    spec.kind = spiked(1.0 + params.zeta2);
  } else {
    throw InvalidParameterError("unknown scenario id '" + id +
                                "' (expected A-F or 1-5)");
  }
  return spec;
}

ScenarioReport run_scenario(const ScenarioParams& params) {
  if (params.n < 3 || params.p < 2) {
    throw DimensionTooSmallError(
        "scenarios require n >= 3 and p >= 2; got n=" +
        std::to_string(params.n) + ", p=" + std::to_string(params.p));
  }

  const CovarianceSpec spec = scenario_covariance(params);
  const Eigen::MatrixXd sigma = realize_covariance(spec);

  MvnSampler sampler(sigma);
  Rng rng = Rng::for_stream(params.seed, stream_id("scenario:" + params.id));
  const Eigen::MatrixXd x = sampler.sample(params.n, rng);

  const StandardizedMatrix std_x = standardize(x, Axis::kColumns);
  const SvdFactors f = compute_svd(std_x);

  ScenarioReport report;
  report.params = params;
  report.structure = spec.describe();
  report.severity = make_severity_report(f, /*with_sl=*/true);
  report.summary = compute_summary(report.severity.sr, f);
  report.eigenvalues =
      f.d.array().square() / static_cast<double>(params.n - 1);
  return report;
}

void write_scenario_report(const ScenarioReport& report,
                           const std::filesystem::path& dir) {
  OutputBundle bundle;

  bundle.files.emplace_back("summary.json", summary_json(report.summary));

  bundle.files.emplace_back(
      "severity.tsv",
      severity_tsv(report.severity, default_names(report.severity.p)));

  std::string eig = "index\teigenvalue\n";
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    eig += std::to_string(i + 1);
    eig += "\t";
    eig += format_double(report.eigenvalues(i));
    eig += "\n";
  }
  bundle.files.emplace_back("eigenvalues.tsv", std::move(eig));

  JsonWriter manifest;
  manifest.field("tool", "ubva")
      .field("version", kVersion)
      .field("command", "simulate")
      .field("scenario", report.params.id)
      .field("structure", report.structure)
      .field("n", static_cast<std::int64_t>(report.params.n))
      .field("p", static_cast<std::int64_t>(report.params.p))
      .field("seed", static_cast<std::uint64_t>(report.params.seed));
  if (report.params.rho.has_value()) {
    manifest.field("rho", *report.params.rho);
  } else {
    manifest.field_null("rho");
  }
  manifest.field("zeta2", report.params.zeta2)
      .field("k_spikes", static_cast<std::int64_t>(report.params.k_spikes));
  if (report.params.ok2.has_value()) {
    manifest.field("ok2", *report.params.ok2);
  } else {
    manifest.field_null("ok2");
  }
  manifest
      .field("basis_seed", static_cast<std::uint64_t>(report.params.basis_seed))
      .field("rng", kRngId);
  bundle.files.emplace_back("manifest.json", manifest.str());

  write_bundle(dir, bundle);
}

}  // namespace ubva
