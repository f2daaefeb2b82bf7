#include "ubva/genotype.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <string_view>
#include <thread>

#include "ubva/errors.hpp"
#include "ubva/matrix_io.hpp"
#include "ubva/report_io.hpp"

namespace ubva {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::int8_t parse_genotype(std::string_view field,
                           const std::filesystem::path& path,
                           std::size_t line_no) {
  if (field == "NA" || field == "." || field == "-1") return -1;
  if (field == "0") return 0;
  if (field == "1") return 1;
  if (field == "2") return 2;
  throw ParseError(path.string(), line_no,
                   "invalid genotype '" + std::string(field) +
                       "' (expected 0, 1, 2, NA, -1 or .)");
}

std::vector<SnpInfo> read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string(), 1, "empty metadata file");
  }
  const auto header = split_tabs(chomp(line));
  const bool has_hwe = header.size() == 4 && header[3] == "hwe_pass";
  if (!((header.size() == 3 || has_hwe) && header[0] == "snp_id" &&
        header[1] == "chr" && header[2] == "pos")) {
    throw ParseError(path.string(), 1,
                     "expected header 'snp_id\tchr\tpos[\thwe_pass]'");
  }

  std::vector<SnpInfo> snps;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = chomp(line);
    if (body.empty()) continue;
    const auto fields = split_tabs(body);
    if (fields.size() != header.size()) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(fields.size()));
    }
    SnpInfo snp;
    snp.id = std::string(fields[0]);
    snp.chromosome = std::string(fields[1]);
    if (snp.id.empty() || snp.chromosome.empty()) {
      throw ParseError(path.string(), line_no, "empty snp_id or chr");
    }
    const auto res = std::from_chars(
        fields[2].data(), fields[2].data() + fields[2].size(), snp.position);
    if (res.ec != std::errc{} ||
        res.ptr != fields[2].data() + fields[2].size() || snp.position < 0) {
      throw ParseError(path.string(), line_no,
                       "invalid position '" + std::string(fields[2]) + "'");
    }
    if (has_hwe) {
      if (fields[3] == "0") {
        snp.hwe_pass = false;
      } else if (fields[3] == "1") {
        snp.hwe_pass = true;
      } else {
        throw ParseError(path.string(), line_no,
                         "invalid hwe_pass '" + std::string(fields[3]) +
                             "' (expected 0 or 1)");
      }
    }
    snps.push_back(std::move(snp));
  }
  return snps;
}

void check_duplicate_ids(const std::vector<SnpInfo>& snps) {
  std::vector<std::string_view> ids;
  ids.reserve(snps.size());
  for (const auto& snp : snps) ids.push_back(snp.id);
  std::sort(ids.begin(), ids.end());
  const auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw DuplicateSnpIdError(std::string(*dup));
  }
}

GenotypePanel parse_panel_tsv(const std::filesystem::path& genotype_path,
                              std::vector<SnpInfo> snps) {
  std::ifstream in(genotype_path);
  if (!in) {
    throw IoError("cannot open " + genotype_path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(genotype_path.string(), 1, "empty genotype file");
  }
  const auto header = split_tabs(chomp(line));
  if (header.empty() || header[0] != "sample_id") {
    throw ParseError(genotype_path.string(), 1,
                     "first header field must be 'sample_id'");
  }
  const std::size_t p = header.size() - 1;
  if (p != snps.size()) {
    throw ParseError(genotype_path.string(), 1,
                     "genotype matrix has " + std::to_string(p) +
                         " SNP columns but metadata lists " +
                         std::to_string(snps.size()));
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (header[j + 1] != snps[j].id) {
      throw ParseError(genotype_path.string(), 1,
                       "SNP column " + std::to_string(j + 1) + " is '" +
                           std::string(header[j + 1]) +
                           "' but metadata row " + std::to_string(j + 1) +
                           " is '" + snps[j].id + "'");
    }
  }

  GenotypePanel panel;
  panel.snps = std::move(snps);
  std::vector<std::int8_t> data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = chomp(line);
    if (body.empty()) continue;
    const auto fields = split_tabs(body);
    if (fields.size() != p + 1) {
      throw ParseError(genotype_path.string(), line_no,
                       "expected " + std::to_string(p + 1) +
                           " fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw ParseError(genotype_path.string(), line_no, "empty sample_id");
    }
    panel.samples.emplace_back(fields[0]);
    for (std::size_t j = 0; j < p; ++j) {
      data.push_back(parse_genotype(fields[j + 1], genotype_path, line_no));
    }
  }

  const std::size_t n = panel.samples.size();
  panel.genotypes.resize(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      panel.genotypes(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) = data[i * p + j];
    }
  }
  return panel;
}

GenotypePanel parse_panel_binary(const std::filesystem::path& genotype_path,
                                 std::vector<SnpInfo> snps) {
  const NamedMatrix raw = read_matrix_binary(genotype_path);
  if (static_cast<std::size_t>(raw.values.cols()) != snps.size()) {
    throw ParseError(genotype_path.string(), 0,
                     "genotype matrix has " +
                         std::to_string(raw.values.cols()) +
                         " SNP columns but metadata lists " +
                         std::to_string(snps.size()));
  }
  GenotypePanel panel;
  panel.snps = std::move(snps);
  panel.genotypes.resize(raw.values.rows(), raw.values.cols());
  for (Eigen::Index i = 0; i < raw.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.values.cols(); ++j) {
      const double v = raw.values(i, j);
      if (std::isnan(v)) {
        panel.genotypes(i, j) = -1;
      } else if (v == 0.0 || v == 1.0 || v == 2.0) {
        panel.genotypes(i, j) = static_cast<std::int8_t>(v);
      } else {
        throw ParseError(genotype_path.string(), 0,
                         "invalid genotype dosage " + format_double(v) +
                             " (expected 0, 1, 2 or NaN)");
      }
    }
  }
  panel.samples.reserve(static_cast<std::size_t>(raw.values.rows()));
  for (Eigen::Index i = 0; i < raw.values.rows(); ++i) {
    panel.samples.push_back("S" + std::to_string(i + 1));
  }
  return panel;
}

}  // namespace

bool chromosome_less(const std::string& a, const std::string& b) {
  const auto key = [](const std::string& label) {
    std::string_view s(label);
    if (s.size() > 3 && (s.substr(0, 3) == "chr" || s.substr(0, 3) == "CHR")) {
      s.remove_prefix(3);
    }
    const bool numeric =
        !s.empty() && s.size() <= 9 &&
        std::all_of(s.begin(), s.end(),
                    [](unsigned char c) { return std::isdigit(c); });
    long value = 0;
    if (numeric) {
      for (char c : s) value = value * 10 + (c - '0');
    }
    return std::tuple<int, long, std::string_view>(numeric ? 0 : 1, value, s);
  };
  const auto ka = key(a);
  const auto kb = key(b);
  if (ka != kb) return ka < kb;
  return a < b;
}

GenotypePanel parse_panel(const std::filesystem::path& genotype_path,
                          const std::filesystem::path& metadata_path,
                          PanelFormat format) {
  std::vector<SnpInfo> snps = read_metadata(metadata_path);
  if (snps.empty()) {
    throw EmptyPanelError("metadata lists no SNPs");
  }
  check_duplicate_ids(snps);

  GenotypePanel panel =
      format == PanelFormat::kTsvMatrix
          ? parse_panel_tsv(genotype_path, std::move(snps))
          : parse_panel_binary(genotype_path, std::move(snps));
  if (panel.n() == 0) {
    throw EmptyPanelError("genotype matrix has no samples");
  }
  return panel;
}

Eigen::VectorXd compute_maf(const GenotypePanel& panel) {
  Eigen::VectorXd maf(panel.p());
  for (Eigen::Index j = 0; j < panel.p(); ++j) {
    long sum = 0;
    long observed = 0;
    for (Eigen::Index i = 0; i < panel.n(); ++i) {
      const std::int8_t g = panel.genotypes(i, j);
      if (g < 0) continue;
      sum += g;
      ++observed;
    }
    if (observed == 0) {
      throw AllMissingError(static_cast<std::size_t>(j));
    }
    const double f =
        static_cast<double>(sum) / (2.0 * static_cast<double>(observed));
    maf(j) = std::min(f, 1.0 - f);
  }
  return maf;
}

FilterResult filter_snps(const GenotypePanel& panel, double maf_min,
                         double max_missing) {
  if (maf_min < 0.0 || maf_min > 0.5) {
    throw InvalidParameterError("maf_min must lie in [0, 0.5]");
  }
  if (max_missing < 0.0 || max_missing > 1.0) {
    throw InvalidParameterError("max_missing must lie in [0, 1]");
  }

  const Eigen::Index n = panel.n();
  FilterResult result;
  result.n_before = panel.p();
  result.decisions.reserve(static_cast<std::size_t>(panel.p()));

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < panel.p(); ++j) {
    const auto& snp = panel.snps[static_cast<std::size_t>(j)];
    long sum = 0;
    long observed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::int8_t g = panel.genotypes(i, j);
      if (g < 0) continue;
      sum += g;
      ++observed;
    }
    const double missing_rate =
        static_cast<double>(n - observed) / static_cast<double>(n);
    std::string reason = "kept";
    if (missing_rate > max_missing) {
      reason = "missing_rate";
    } else if (observed == 0) {
      reason = "low_maf";  // unreachable unless max_missing == 1
    } else {
      const double f =
          static_cast<double>(sum) / (2.0 * static_cast<double>(observed));
      if (std::min(f, 1.0 - f) < maf_min) {
        reason = "low_maf";
      } else if (snp.hwe_pass.has_value() && !*snp.hwe_pass) {
        reason = "hwe_fail";
      }
    }
    result.decisions.push_back({snp.id, reason});
    if (reason == "kept") kept.push_back(j);
  }

  GenotypePanel filtered;
  filtered.samples = panel.samples;
  filtered.genotypes.resize(n, static_cast<Eigen::Index>(kept.size()));
  filtered.snps.reserve(kept.size());
  for (std::size_t out_j = 0; out_j < kept.size(); ++out_j) {
    filtered.genotypes.col(static_cast<Eigen::Index>(out_j)) =
        panel.genotypes.col(kept[out_j]);
    filtered.snps.push_back(panel.snps[static_cast<std::size_t>(kept[out_j])]);
  }
  for (const auto& snp : panel.snps) {
    ++filtered.prefilter_counts[snp.chromosome];
  }

  result.n_after = filtered.p();
  result.panel = std::move(filtered);
  return result;
}

StandardizedMatrix standardize_dosages(const GenotypePanel& panel,
                                       const std::vector<Eigen::Index>& columns,
                                       bool mean_impute) {
  const Eigen::Index n = panel.n();
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  if (n < 3 || k < 2) {
    throw DimensionTooSmallError(
        "dosage standardization requires n >= 3 samples and >= 2 SNPs; got "
        "n=" +
        std::to_string(n) + ", SNPs=" + std::to_string(k));
  }

  StandardizedMatrix out;
  out.axis = Axis::kColumns;
  out.values.resize(n, k);
  out.center.resize(k);
  out.scale.resize(k);

  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index j = columns[static_cast<std::size_t>(c)];
    if (j < 0 || j >= panel.p()) {
      throw IndexOutOfRangeError("SNP column " + std::to_string(j) +
                                 " out of range");
    }
    long sum = 0;
    long observed = 0;
    std::int8_t lo = 3;
    std::int8_t hi = -2;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::int8_t g = panel.genotypes(i, j);
      if (g < 0) continue;
      sum += g;
      ++observed;
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    if (observed == 0) {
      throw AllMissingError(static_cast<std::size_t>(j));
    }
    if (observed < n && !mean_impute) {
      throw MissingDataError(
          "SNP '" + panel.snps[static_cast<std::size_t>(j)].id +
          "' has missing genotypes; enable mean imputation or filter with "
          "max_missing=0");
    }
    if (lo == hi) {
      throw ConstantVectorError(static_cast<std::size_t>(j), "SNP column");
    }

    const double mean =
        static_cast<double>(sum) / static_cast<double>(observed);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::int8_t g = panel.genotypes(i, j);
      if (g < 0) continue;
      const double dev = static_cast<double>(g) - mean;
      ss += dev * dev;
    }
    const double sd = std::sqrt(ss / static_cast<double>(observed - 1));

    out.center(c) = mean;
    out.scale(c) = sd;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::int8_t g = panel.genotypes(i, j);
      // Missing dosages sit at the observed mean, i.e. exactly 0 after
      // standardization.
      out.values(i, c) =
          g < 0 ? 0.0 : (static_cast<double>(g) - mean) / sd;
    }
  }
  return out;
}

namespace {

ChromosomeReport chromosome_report(const GenotypePanel& panel,
                                   const std::string& label,
                                   std::vector<Eigen::Index> columns,
                                   bool mean_impute) {
  ChromosomeReport report;
  report.chromosome = label;
  report.columns = std::move(columns);
  report.snps_after = static_cast<Eigen::Index>(report.columns.size());
  const auto prefilter = panel.prefilter_counts.find(label);
  report.snps_before = prefilter != panel.prefilter_counts.end()
                           ? prefilter->second
                           : report.snps_after;

  const StandardizedMatrix x =
      standardize_dosages(panel, report.columns, mean_impute);
  const SvdFactors f = compute_svd(x);
  report.severity = make_severity_report(f, /*with_sl=*/false);
  report.summary = compute_summary(report.severity.sr, f);
  return report;
}

}  // namespace

std::vector<ChromosomeReport> chromosome_measures(const GenotypePanel& panel,
                                                  bool mean_impute,
                                                  int threads) {
  if (threads < 1) {
    throw InvalidParameterError("threads must be at least 1");
  }
  if (panel.p() == 0) {
    throw EmptyPanelError("no SNPs to analyze");
  }

  std::map<std::string, std::vector<Eigen::Index>> groups;
  for (Eigen::Index j = 0; j < panel.p(); ++j) {
    groups[panel.snps[static_cast<std::size_t>(j)].chromosome].push_back(j);
  }

  std::vector<std::string> labels;
  labels.reserve(groups.size());
  for (const auto& [label, cols] : groups) labels.push_back(label);
  std::sort(labels.begin(), labels.end(), chromosome_less);

  std::vector<std::vector<Eigen::Index>> columns_by_chrom;
  for (const auto& label : labels) {
    auto& cols = groups[label];
    if (cols.size() < 2) {
      throw ChromosomeTooSmallError(label, cols.size());
    }
    std::sort(cols.begin(), cols.end(), [&](Eigen::Index a, Eigen::Index b) {
      const auto& sa = panel.snps[static_cast<std::size_t>(a)];
      const auto& sb = panel.snps[static_cast<std::size_t>(b)];
      if (sa.position != sb.position) return sa.position < sb.position;
      return a < b;
    });
    columns_by_chrom.push_back(std::move(cols));
  }

  const std::size_t n_jobs = labels.size();
  std::vector<ChromosomeReport> reports(n_jobs);

  const int workers =
      static_cast<int>(std::min<std::size_t>(n_jobs, threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) {
      reports[i] = chromosome_report(panel, labels[i],
                                     std::move(columns_by_chrom[i]),
                                     mean_impute);
    }
    return reports;
  }

  // Jobs are claimed through an atomic counter and written to fixed slots, so
  // the merged result is identical for any thread count or schedule.
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_jobs) return;
      try {
        reports[i] = chromosome_report(panel, labels[i],
                                       std::move(columns_by_chrom[i]),
                                       mean_impute);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

Eigen::MatrixXd pc_scores(const SvdFactors& f, Eigen::Index k) {
  if (k < 1 || k > f.m()) {
    throw KTooLargeError("requested " + std::to_string(k) +
                         " principal components but only " +
                         std::to_string(f.m()) + " are available");
  }
  return f.u.leftCols(k) * f.d.head(k).asDiagonal();
}

std::vector<Peak> find_peaks(const ChromosomeReport& report,
                             const GenotypePanel& panel) {
  std::vector<Peak> peaks;
  const auto& flagged = report.severity.flagged;
  const Eigen::Index k = static_cast<Eigen::Index>(report.columns.size());
  Eigen::Index i = 0;
  while (i < k) {
    if (!flagged[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    Peak peak;
    peak.chromosome = report.chromosome;
    peak.first = i;
    peak.max_sr = report.severity.sr(i);
    while (i + 1 < k && flagged[static_cast<std::size_t>(i + 1)]) {
      ++i;
      peak.max_sr = std::max(peak.max_sr, report.severity.sr(i));
    }
    peak.last = i;
    peak.n_snps = peak.last - peak.first + 1;
    peak.start_position =
        panel.snps[static_cast<std::size_t>(report.columns[peak.first])]
            .position;
    peak.end_position =
        panel.snps[static_cast<std::size_t>(report.columns[peak.last])]
            .position;
    peaks.push_back(std::move(peak));
    ++i;
  }
  return peaks;
}

std::string manhattan_tsv(const std::vector<ChromosomeReport>& reports,
                          const GenotypePanel& panel) {
  std::string out = "chromosome\tposition\tsnp_id\tsR\tflagged\n";
  for (const auto& report : reports) {
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      const auto& snp =
          panel.snps[static_cast<std::size_t>(report.columns[c])];
      out += report.chromosome;
      out += "\t";
      out += std::to_string(snp.position);
      out += "\t";
      out += snp.id;
      out += "\t";
      out += format_double(report.severity.sr(static_cast<Eigen::Index>(c)));
      out += "\t";
      out += report.severity.flagged[c] ? "1" : "0";
      out += "\n";
    }
  }
  return out;
}

}  // namespace ubva
