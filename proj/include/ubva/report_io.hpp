#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ubva/severity.hpp"

namespace ubva {

// Shortest decimal representation that round-trips a double (17 significant
// digits, locale-independent).  Non-finite values render as "inf", "-inf",
// "nan".
std::string format_double(double value);

// Minimal single-level JSON object writer with insertion-ordered keys and
// 2-space indentation.  Numbers use format_double; non-finite numbers are
// emitted as JSON strings ("inf") since JSON has no infinity literal.
class JsonWriter {
 public:
  JsonWriter& field(std::string_view key, double value);
  JsonWriter& field(std::string_view key, std::int64_t value);
  JsonWriter& field(std::string_view key, std::uint64_t value);
  JsonWriter& field(std::string_view key, std::string_view value);
  JsonWriter& field_bool(std::string_view key, bool value);
  JsonWriter& field_null(std::string_view key);

  std::string str() const;

 private:
  void key(std::string_view k);
  std::string body_;
};

// Serializes a severity report as TSV with columns
//   index  name  sR  lower  upper  flagged
// (1-based index, flagged as 0/1).  Optional extra numeric columns (e.g. vif,
// ld_adj) are appended in order.
struct ExtraColumn {
  std::string name;
  Eigen::VectorXd values;
};
std::string severity_tsv(const SeverityReport& report,
                         const std::vector<std::string>& names,
                         const std::vector<ExtraColumn>& extras = {});

// Serializes the pinned summary keys:
//   sRs, BsRs, LsRs, w1, w2, red, condition_number, n, p.
std::string summary_json(const SummaryMeasures& summary);

// Parses a summary.json produced by summary_json (accepts "inf"/"-inf"/"nan"
// strings for non-finite numbers).
SummaryMeasures parse_summary_json(const std::filesystem::path& path);

// Writes `content` to `path` via a temporary file in the same directory plus
// an atomic rename, so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// Writes a set of (relative name, content) files into `dir`, creating it if
// needed.  All content is composed before any write, and each file is written
// atomically; a failure while composing therefore leaves no output at all.
struct OutputBundle {
  std::vector<std::pair<std::string, std::string>> files;
};
void write_bundle(const std::filesystem::path& dir, const OutputBundle& bundle);

}  // namespace ubva
