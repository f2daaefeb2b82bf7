#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ubva/baselines.hpp"
#include "ubva/severity.hpp"

namespace ubva {

struct SnpInfo {
  std::string id;
  std::string chromosome;
  std::int64_t position = 0;
  std::optional<bool> hwe_pass;  // present only if the metadata has the column
};

// A genotype panel: n samples x p SNPs with additive coding 0/1/2 and -1 for
// missing.  `prefilter_counts` records the per-chromosome SNP counts before
// filtering (filled by filter_snps; empty means the panel is unfiltered).
struct GenotypePanel {
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> genotypes;
  std::vector<SnpInfo> snps;           // length p
  std::vector<std::string> samples;    // length n
  std::map<std::string, Eigen::Index> prefilter_counts;

  Eigen::Index n() const { return genotypes.rows(); }
  Eigen::Index p() const { return genotypes.cols(); }
};

enum class PanelFormat { kTsvMatrix, kBinary };

// Reads a genotype matrix plus SNP metadata.
//
// TSV matrix: header "sample_id<TAB><snp ids...>"; one row per sample with
// genotypes 0/1/2, or NA/-1/. for missing.  Binary: the CSEV matrix layout
// with float64 dosages 0/1/2 and NaN for missing (sample ids synthesized).
//
// Metadata TSV: header "snp_id<TAB>chr<TAB>pos[<TAB>hwe_pass]"; one row per
// SNP, in the same order as the matrix columns.  hwe_pass is 0/1.
// Violations raise ParseError / DuplicateSnpId / EmptyPanel.
GenotypePanel parse_panel(const std::filesystem::path& genotype_path,
                          const std::filesystem::path& metadata_path,
                          PanelFormat format);

// Minor-allele frequency per SNP: f = sum(g) / (2 * observed), folded to
// min(f, 1-f).  An all-missing SNP raises AllMissing.
Eigen::VectorXd compute_maf(const GenotypePanel& panel);

// Keeps SNPs with maf >= maf_min, missing rate <= max_missing, and (when the
// metadata provides it) hwe_pass == true.  Records pre-filter per-chromosome
// counts on the returned panel and a per-SNP decision log.
struct FilterDecision {
  std::string snp_id;
  std::string reason;  // "kept", "low_maf", "missing_rate", "hwe_fail"
};
struct FilterResult {
  GenotypePanel panel;
  std::vector<FilterDecision> decisions;
  Eigen::Index n_before = 0;
  Eigen::Index n_after = 0;
};
FilterResult filter_snps(const GenotypePanel& panel, double maf_min = 0.01,
                         double max_missing = 0.0);

// Dosage standardization of selected SNP columns: each column is centered by
// its observed mean and scaled by its observed sample standard deviation.
// Missing entries require mean_impute (they then standardize to exactly 0);
// without it any missing value raises MissingData.  Constant SNPs raise
// ConstantVector, all-missing SNPs AllMissing.
StandardizedMatrix standardize_dosages(const GenotypePanel& panel,
                                       const std::vector<Eigen::Index>& columns,
                                       bool mean_impute = false);

// Per-chromosome severity measures.  SNPs are grouped by chromosome label in
// natural order (numeric labels ascending, then others lexicographic) and
// sorted by position within a chromosome.  A chromosome with fewer than 2
// SNPs raises ChromosomeTooSmall.  `threads` > 1 computes chromosomes in
// parallel; results are merged in chromosome order so output is independent
// of scheduling.
struct ChromosomeReport {
  std::string chromosome;
  std::vector<Eigen::Index> columns;  // panel column indices, position order
  SeverityReport severity;
  SummaryMeasures summary;
  Eigen::Index snps_before = 0;  // before filtering (if recorded)
  Eigen::Index snps_after = 0;
};
std::vector<ChromosomeReport> chromosome_measures(const GenotypePanel& panel,
                                                  bool mean_impute = false,
                                                  int threads = 1);

// Principal-component scores: the first k columns of U D.  k must not exceed
// the number of retained singular values (KTooLarge).
Eigen::MatrixXd pc_scores(const SvdFactors& f, Eigen::Index k);

// Maximal runs of consecutive flagged SNPs within a chromosome (position
// order).  Indices are 0-based positions into `report.columns`.
struct Peak {
  std::string chromosome;
  Eigen::Index first = 0;          // run start (index into report.columns)
  Eigen::Index last = 0;           // run end, inclusive
  std::int64_t start_position = 0;
  std::int64_t end_position = 0;
  Eigen::Index n_snps = 0;
  double max_sr = 0.0;
};
std::vector<Peak> find_peaks(const ChromosomeReport& report,
                             const GenotypePanel& panel);

// Merged Manhattan table across chromosomes:
//   chromosome  position  snp_id  sR  flagged
std::string manhattan_tsv(const std::vector<ChromosomeReport>& reports,
                          const GenotypePanel& panel);

// Natural chromosome-label ordering (1 < 2 < 10 < X); strips an optional
// "chr" prefix before comparing.
bool chromosome_less(const std::string& a, const std::string& b);

}  // namespace ubva
