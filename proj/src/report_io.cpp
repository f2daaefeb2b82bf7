#include "ubva/report_io.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <system_error>

#include <json.hpp>

#include "ubva/errors.hpp"

namespace ubva {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void JsonWriter::key(std::string_view k) {
  if (!body_.empty()) body_ += ",\n";
  body_ += "  \"";
  body_ += k;
  body_ += "\": ";
}

JsonWriter& JsonWriter::field(std::string_view k, double value) {
  key(k);
  if (std::isfinite(value)) {
    body_ += format_double(value);
  } else {
    // JSON has no literal for non-finite numbers; emit a string.
    body_ += "\"" + format_double(value) + "\"";
  }
  return *this;
}

JsonWriter& JsonWriter::field(std::string_view k, std::int64_t value) {
  key(k);
  body_ += std::to_string(value);
  return *this;
}

JsonWriter& JsonWriter::field(std::string_view k, std::uint64_t value) {
  key(k);
  body_ += std::to_string(value);
  return *this;
}

JsonWriter& JsonWriter::field(std::string_view k, std::string_view value) {
  key(k);
  body_ += "\"";
  for (char c : value) {
    switch (c) {
      case '"': body_ += "\\\""; break;
      case '\\': body_ += "\\\\"; break;
      case '\n': body_ += "\\n"; break;
      case '\t': body_ += "\\t"; break;
      default: body_ += c;
    }
  }
  body_ += "\"";
  return *this;
}

JsonWriter& JsonWriter::field_bool(std::string_view k, bool value) {
  key(k);
  body_ += value ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::field_null(std::string_view k) {
  key(k);
  body_ += "null";
  return *this;
}

std::string JsonWriter::str() const { return "{\n" + body_ + "\n}\n"; }

std::string severity_tsv(const SeverityReport& report,
                         const std::vector<std::string>& names,
                         const std::vector<ExtraColumn>& extras) {
  if (static_cast<Eigen::Index>(names.size()) != report.p) {
    throw InvalidParameterError("name list length does not match p");
  }
  for (const auto& extra : extras) {
    if (extra.values.size() != report.p) {
      throw InvalidParameterError("extra column '" + extra.name +
                                  "' length does not match p");
    }
  }

  std::string out = "index\tname\tsR\tlower\tupper\tflagged";
  for (const auto& extra : extras) out += "\t" + extra.name;
  out += "\n";
  for (Eigen::Index j = 0; j < report.p; ++j) {
    out += std::to_string(j + 1);
    out += "\t";
    out += names[static_cast<std::size_t>(j)];
    out += "\t";
    out += format_double(report.sr(j));
    out += "\t";
    out += format_double(report.lower(j));
    out += "\t";
    out += format_double(report.upper);
    out += "\t";
    out += report.flagged[static_cast<std::size_t>(j)] ? "1" : "0";
    for (const auto& extra : extras) {
      out += "\t";
      out += format_double(extra.values(j));
    }
    out += "\n";
  }
  return out;
}

std::string summary_json(const SummaryMeasures& summary) {
  JsonWriter w;
  w.field("sRs", summary.srs)
      .field("BsRs", summary.bsrs)
      .field("LsRs", summary.lsrs)
      .field("w1", summary.w1)
      .field("w2", summary.w2)
      .field("red", summary.red)
      .field("condition_number", summary.condition_number)
      .field("n", static_cast<std::int64_t>(summary.n))
      .field("p", static_cast<std::int64_t>(summary.p));
  return w.str();
}

namespace {

double json_number(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("ParseError",
                     std::string("unexpected string for numeric key '") + key +
                         "': " + s);
  }
  return v.get<double>();
}

}  // namespace

SummaryMeasures parse_summary_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  try {
    SummaryMeasures s;
    s.srs = json_number(j, "sRs");
    s.bsrs = json_number(j, "BsRs");
    s.lsrs = json_number(j, "LsRs");
    s.w1 = json_number(j, "w1");
    s.w2 = json_number(j, "w2");
    s.red = json_number(j, "red");
    s.condition_number = json_number(j, "condition_number");
    s.n = j.at("n").get<Eigen::Index>();
    s.p = j.at("p").get<Eigen::Index>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path tmp =
      path.string() + ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot create " + tmp.string());
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("failed renaming into " + path.string());
  }
}

void write_bundle(const std::filesystem::path& dir,
                  const OutputBundle& bundle) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + dir.string() + ": " +
                  ec.message());
  }
  for (const auto& [name, content] : bundle.files) {
    write_file_atomic(dir / name, content);
  }
}

}  // namespace ubva
