#include "ubva/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string_view>

#include "ubva/errors.hpp"
#include "ubva/report_io.hpp"

namespace ubva {

namespace {

// The CSEV payload is little-endian by definition.
static_assert(std::endian::native == std::endian::little,
              "binary matrix I/O assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'S', 'E', 'V'};

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

double parse_value(std::string_view field, const std::filesystem::path& path,
                   std::size_t line_no) {
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError(path.string(), line_no,
                     "invalid numeric value '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(path.string(), line_no,
                     "non-finite value '" + std::string(field) + "'");
  }
  return value;
}

// Strips a trailing carriage return so CRLF files parse as TSV.
std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::vector<std::string> default_names(Eigen::Index p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    names.push_back("V" + std::to_string(j + 1));
  }
  return names;
}

NamedMatrix read_matrix_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string(), 1, "empty file; expected a header line");
  }
  NamedMatrix out;
  for (std::string_view field : split_tabs(chomp(line))) {
    if (field.empty()) {
      throw ParseError(path.string(), 1, "empty variable name in header");
    }
    out.names.emplace_back(field);
  }
  const std::size_t p = out.names.size();
  if (p < 1) {
    throw ParseError(path.string(), 1, "header has no variables");
  }

  std::vector<double> data;
  std::size_t n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = chomp(line);
    if (body.empty()) continue;  // tolerate a trailing blank line
    const auto fields = split_tabs(body);
    if (fields.size() != p) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(p) + " fields, got " +
                           std::to_string(fields.size()));
    }
    for (std::string_view field : fields) {
      data.push_back(parse_value(field, path, line_no));
    }
    ++n;
  }
  if (n == 0) {
    throw ParseError(path.string(), line_no, "no data rows");
  }

  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          data[i * p + j];
    }
  }
  return out;
}

void write_matrix_tsv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names) {
  if (static_cast<Eigen::Index>(names.size()) != values.cols()) {
    throw InvalidParameterError("name list length does not match columns");
  }
  std::string out;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j > 0) out += "\t";
    out += names[j];
  }
  out += "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out += "\t";
      out += format_double(values(i, j));
    }
    out += "\n";
  }
  write_file_atomic(path, out);
}

NamedMatrix read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }

  char magic[4];
  std::uint32_t header[3];  // n, p, reserved
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(path.string(), 0, "not a CSEV matrix file");
  }
  if (header[2] != 0) {
    throw ParseError(path.string(), 0, "nonzero reserved header field");
  }
  const Eigen::Index n = header[0];
  const Eigen::Index p = header[1];
  if (n < 1 || p < 1) {
    throw ParseError(path.string(), 0, "empty matrix");
  }

  NamedMatrix out;
  out.names = default_names(p);
  out.values.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double value = 0.0;
      in.read(reinterpret_cast<char*>(&value), sizeof(value));
      if (!in) {
        throw ParseError(path.string(), 0, "truncated matrix payload");
      }
      out.values(i, j) = value;
    }
  }
  in.peek();
  if (!in.eof()) {
    throw ParseError(path.string(), 0, "trailing bytes after matrix payload");
  }
  return out;
}

void write_matrix_binary(const std::filesystem::path& path,
                         const Eigen::MatrixXd& values) {
  std::string out;
  out.reserve(16 + static_cast<std::size_t>(values.size()) * sizeof(double));
  out.append(kMagic, sizeof(kMagic));
  const std::uint32_t header[3] = {static_cast<std::uint32_t>(values.rows()),
                                   static_cast<std::uint32_t>(values.cols()),
                                   0};
  out.append(reinterpret_cast<const char*>(header), sizeof(header));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double value = values(i, j);
      out.append(reinterpret_cast<const char*>(&value), sizeof(value));
    }
  }
  write_file_atomic(path, out);
}

NamedMatrix read_matrix(const std::filesystem::path& path,
                        MatrixFormat format) {
  return format == MatrixFormat::kTsv ? read_matrix_tsv(path)
                                      : read_matrix_binary(path);
}

}  // namespace ubva
