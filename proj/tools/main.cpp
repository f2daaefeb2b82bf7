#include <CLI11.hpp>

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ubva/baselines.hpp"
#include "ubva/errors.hpp"
#include "ubva/genotype.hpp"
#include "ubva/matrix_io.hpp"
#include "ubva/mvn.hpp"
#include "ubva/report_io.hpp"
#include "ubva/rng.hpp"
#include "ubva/scenario.hpp"
#include "ubva/severity.hpp"
#include "ubva/version.hpp"

namespace {

using ubva::JsonWriter;
using ubva::OutputBundle;

std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
  }
  return out;
}

// ----------------------------------------------------------------- measure

struct MeasureArgs {
  std::string input;
  std::string out;
  bool binary = false;
  bool with_vif = false;
  bool row_measures = false;
  std::optional<std::int64_t> window;
};

void run_measure(const MeasureArgs& args) {
  const ubva::NamedMatrix data = ubva::read_matrix(
      args.input,
      args.binary ? ubva::MatrixFormat::kBinary : ubva::MatrixFormat::kTsv);
  if (!data.values.allFinite()) {
    throw ubva::InputError("ParseError",
                           args.input + ": matrix contains non-finite values");
  }

  const ubva::StandardizedMatrix x =
      ubva::standardize(data.values, ubva::Axis::kColumns);
  const ubva::SvdFactors f = ubva::compute_svd(x);
  const ubva::SeverityReport severity =
      ubva::make_severity_report(f, /*with_sl=*/true);
  const ubva::SummaryMeasures summary =
      ubva::compute_summary(severity.sr, f);

  std::vector<ubva::ExtraColumn> extras;
  if (args.with_vif) {
    extras.push_back({"vif", ubva::vif(f)});
  }
  if (args.window.has_value()) {
    extras.push_back({"ld_adj", ubva::ld_adj(x, *args.window)});
    extras.push_back({"ld_score", ubva::ld_score(x, *args.window)});
  }

  std::optional<Eigen::VectorXd> sl_row;
  if (args.row_measures) {
    const ubva::StandardizedMatrix xr =
        ubva::standardize(data.values, ubva::Axis::kRows);
    const ubva::SvdFactors fr = ubva::compute_svd(xr);
    const ubva::SeverityReport row_report =
        ubva::make_severity_report(fr, /*with_sl=*/true);
    sl_row = row_report.sl;
  }
  const ubva::EffectiveCounts eff =
      ubva::effective_counts(severity.sr, sl_row, f.n, f.p);

  OutputBundle bundle;
  bundle.files.emplace_back("severity.tsv",
                            ubva::severity_tsv(severity, data.names, extras));
  bundle.files.emplace_back("summary.json", ubva::summary_json(summary));

  JsonWriter eff_json;
  eff_json.field("p_eff", eff.p_eff).field("max_p_eff", eff.max_p_eff);
  if (eff.n_eff.has_value()) {
    eff_json.field("n_eff", *eff.n_eff).field("max_n_eff", *eff.max_n_eff);
  }
  bundle.files.emplace_back("effective.json", eff_json.str());

  JsonWriter manifest;
  manifest.field("tool", "ubva")
      .field("version", ubva::kVersion)
      .field("command", "measure")
      .field("input", args.input)
      .field("format", args.binary ? "binary" : "tsv")
      .field("n", static_cast<std::int64_t>(f.n))
      .field("p", static_cast<std::int64_t>(f.p))
      .field_bool("vif", args.with_vif)
      .field_bool("row_measures", args.row_measures);
  if (args.window.has_value()) {
    manifest.field("window", *args.window);
  } else {
    manifest.field_null("window");
  }
  bundle.files.emplace_back("manifest.json", manifest.str());

  ubva::write_bundle(args.out, bundle);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  ubva::ScenarioParams params;
  std::string out;
  std::string dump_matrix;
};

void run_simulate(const SimulateArgs& args) {
  const ubva::ScenarioReport report = ubva::run_scenario(args.params);
  ubva::write_scenario_report(report, args.out);

  if (!args.dump_matrix.empty()) {
    // Reproduce the exact draw for export (the report itself stores only
    // measures).
    const Eigen::MatrixXd sigma =
        ubva::realize_covariance(ubva::scenario_covariance(args.params));
    ubva::Rng rng = ubva::Rng::for_stream(
        args.params.seed, ubva::stream_id("scenario:" + args.params.id));
    const Eigen::MatrixXd x = ubva::MvnSampler(sigma).sample(args.params.n, rng);
    const std::filesystem::path path = args.dump_matrix;
    const auto ext = path.extension().string();
    if (ext == ".bin" || ext == ".csev") {
      ubva::write_matrix_binary(path, x);
    } else {
      ubva::write_matrix_tsv(path, x, ubva::default_names(x.cols()));
    }
  }
}

// ------------------------------------------------------------------ genome

struct GenomeArgs {
  std::string genotypes;
  std::string metadata;
  std::string out;
  bool binary = false;
  double maf_min = 0.01;
  double max_missing = 0.0;
  bool impute_mean = false;
  std::int64_t pcs = 0;
  int threads = 1;
};

void run_genome(const GenomeArgs& args) {
  const ubva::GenotypePanel raw = ubva::parse_panel(
      args.genotypes, args.metadata,
      args.binary ? ubva::PanelFormat::kBinary : ubva::PanelFormat::kTsvMatrix);

  ubva::FilterResult filtered =
      ubva::filter_snps(raw, args.maf_min, args.max_missing);
  const ubva::GenotypePanel& panel = filtered.panel;
  if (panel.p() == 0) {
    throw ubva::EmptyPanelError("no SNPs survive filtering");
  }

  const std::vector<ubva::ChromosomeReport> reports =
      ubva::chromosome_measures(panel, args.impute_mean, args.threads);

  OutputBundle bundle;
  bundle.files.emplace_back("manhattan.tsv",
                            ubva::manhattan_tsv(reports, panel));

  std::string filter_log = "snp_id\tdecision\n";
  for (const auto& decision : filtered.decisions) {
    filter_log += decision.snp_id + "\t" + decision.reason + "\n";
  }
  bundle.files.emplace_back("filter.tsv", std::move(filter_log));

  std::string peaks_tsv =
      "chromosome\tstart_position\tend_position\tn_snps\tmax_sR\n";
  for (const auto& report : reports) {
    for (const auto& peak : ubva::find_peaks(report, panel)) {
      peaks_tsv += peak.chromosome + "\t" +
                   std::to_string(peak.start_position) + "\t" +
                   std::to_string(peak.end_position) + "\t" +
                   std::to_string(peak.n_snps) + "\t" +
                   ubva::format_double(peak.max_sr) + "\n";
    }
  }
  bundle.files.emplace_back("peaks.tsv", std::move(peaks_tsv));

  for (const auto& report : reports) {
    bundle.files.emplace_back(
        "chr" + sanitize_label(report.chromosome) + ".summary.json",
        ubva::summary_json(report.summary));
  }

  if (args.pcs > 0) {
    // Whole-panel PCs over the same column ordering the per-chromosome
    // reports use.
    std::vector<Eigen::Index> ordered;
    for (const auto& report : reports) {
      ordered.insert(ordered.end(), report.columns.begin(),
                     report.columns.end());
    }
    const ubva::StandardizedMatrix x =
        ubva::standardize_dosages(panel, ordered, args.impute_mean);
    const ubva::SvdFactors f = ubva::compute_svd(x);
    const Eigen::MatrixXd scores = ubva::pc_scores(f, args.pcs);

    std::string pcs_tsv = "sample_id";
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
      pcs_tsv += "\tPC" + std::to_string(c + 1);
    }
    pcs_tsv += "\n";
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      pcs_tsv += panel.samples[static_cast<std::size_t>(i)];
      for (Eigen::Index c = 0; c < scores.cols(); ++c) {
        pcs_tsv += "\t" + ubva::format_double(scores(i, c));
      }
      pcs_tsv += "\n";
    }
    bundle.files.emplace_back("pcs.tsv", std::move(pcs_tsv));
  }

  // Execution width (--threads) is deliberately not recorded: results are
  // schedule-invariant and manifests stay byte-identical across widths.
  JsonWriter manifest;
  manifest.field("tool", "ubva")
      .field("version", ubva::kVersion)
      .field("command", "genome")
      .field("genotypes", args.genotypes)
      .field("metadata", args.metadata)
      .field("format", args.binary ? "binary" : "tsv")
      .field("maf_min", args.maf_min)
      .field("max_missing", args.max_missing)
      .field_bool("impute_mean", args.impute_mean)
      .field("pcs", args.pcs)
      .field("n_samples", static_cast<std::int64_t>(panel.n()))
      .field("snps_before", static_cast<std::int64_t>(filtered.n_before))
      .field("snps_after", static_cast<std::int64_t>(filtered.n_after))
      .field("n_chromosomes", static_cast<std::int64_t>(reports.size()));
  bundle.files.emplace_back("manifest.json", manifest.str());

  ubva::write_bundle(args.out, bundle);
}

// ----------------------------------------------------------------- compare

int run_compare(const std::vector<std::string>& paths,
                const std::string& out) {
  std::string table =
      "file\tn\tp\tsRs\tBsRs\tLsRs\tw1\tw2\tred\tcondition_number\n";
  for (const auto& path : paths) {
    const ubva::SummaryMeasures s = ubva::parse_summary_json(path);
    table += path;
    table += "\t" + std::to_string(s.n);
    table += "\t" + std::to_string(s.p);
    table += "\t" + ubva::format_double(s.srs);
    table += "\t" + ubva::format_double(s.bsrs);
    table += "\t" + ubva::format_double(s.lsrs);
    table += "\t" + ubva::format_double(s.w1);
    table += "\t" + ubva::format_double(s.w2);
    table += "\t" + ubva::format_double(s.red);
    table += "\t" + ubva::format_double(s.condition_number);
    table += "\n";
  }
  if (out.empty()) {
    std::cout << table;
  } else {
    ubva::write_file_atomic(out, table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uBVA: individualized multi-collinearity measures from the SVD"};
  app.set_version_flag("--version", ubva::kVersion);
  app.require_subcommand(1);

  MeasureArgs measure_args;
  CLI::App* measure = app.add_subcommand(
      "measure", "Severity measures for a numeric data matrix");
  measure->add_option("input", measure_args.input, "Input matrix (TSV/binary)")
      ->required();
  measure->add_option("--out", measure_args.out, "Output directory")
      ->required();
  measure->add_flag("--binary", measure_args.binary,
                    "Input is a CSEV binary matrix");
  measure->add_flag("--vif", measure_args.with_vif,
                    "Add variance inflation factors (requires n > p)");
  measure->add_flag("--row-measures", measure_args.row_measures,
                    "Also run a row-standardized pass for n_eff");
  std::int64_t window_value = -1;
  CLI::Option* window_opt = measure->add_option(
      "--window", window_value, "Add windowed LD sums (+/- this many columns)");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Sample a covariance scenario and measure it");
  simulate
      ->add_option("--scenario", sim_args.params.id,
                   "Structure A-F or scenario 1-5")
      ->required();
  std::int64_t sim_n = 0;
  std::int64_t sim_p = 0;
  simulate->add_option("--n", sim_n, "Samples")->required();
  simulate->add_option("--p", sim_p, "Variables")->required();
  simulate->add_option("--seed", sim_args.params.seed, "RNG seed")->required();
  double rho_value = 0.0;
  CLI::Option* rho_opt =
      simulate->add_option("--rho", rho_value, "Correlation override");
  simulate->add_option("--zeta2", sim_args.params.zeta2,
                       "Spiked noise variance");
  simulate->add_option("--k-spikes", sim_args.params.k_spikes,
                       "Number of spikes");
  double ok2_value = 0.0;
  CLI::Option* ok2_opt =
      simulate->add_option("--ok2", ok2_value, "Smallest spike strength");
  simulate->add_option("--basis-seed", sim_args.params.basis_seed,
                       "Spike basis seed");
  simulate->add_option("--dump-matrix", sim_args.dump_matrix,
                       "Also write the sampled matrix (TSV, or binary for "
                       ".bin/.csev)");
  simulate->add_option("--out", sim_args.out, "Output directory")->required();

  GenomeArgs genome_args;
  CLI::App* genome = app.add_subcommand(
      "genome", "Per-chromosome severity scan of a genotype panel");
  genome->add_option("--genotypes", genome_args.genotypes, "Genotype matrix")
      ->required();
  genome->add_option("--meta", genome_args.metadata, "SNP metadata TSV")
      ->required();
  genome->add_flag("--binary", genome_args.binary,
                   "Genotype matrix is CSEV binary");
  genome->add_option("--maf-min", genome_args.maf_min,
                     "Minimum minor-allele frequency");
  genome->add_option("--max-missing", genome_args.max_missing,
                     "Maximum per-SNP missing rate");
  genome->add_flag("--impute-mean", genome_args.impute_mean,
                   "Mean-impute missing genotypes");
  genome->add_option("--pcs", genome_args.pcs,
                     "Export this many principal-component scores");
  genome->add_option("--threads", genome_args.threads,
                     "Worker threads across chromosomes");
  genome->add_option("--out", genome_args.out, "Output directory")->required();

  std::vector<std::string> compare_paths;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand(
      "compare", "Tabulate summary.json files side by side");
  compare->add_option("summaries", compare_paths, "summary.json paths")
      ->required();
  compare->add_option("--out", compare_out,
                      "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);

    if (measure->parsed()) {
      if (window_opt->count() > 0) {
        measure_args.window = window_value;
      }
      run_measure(measure_args);
    } else if (simulate->parsed()) {
      sim_args.params.n = sim_n;
      sim_args.params.p = sim_p;
      if (rho_opt->count() > 0) sim_args.params.rho = rho_value;
      if (ok2_opt->count() > 0) sim_args.params.ok2 = ok2_value;
      run_simulate(sim_args);
    } else if (genome->parsed()) {
      run_genome(genome_args);
    } else if (compare->parsed()) {
      return run_compare(compare_paths, compare_out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ubva::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ubva::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
