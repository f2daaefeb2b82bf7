#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace ubva {

// A numeric matrix with column (variable) names.
struct NamedMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> names;  // length p
};

enum class MatrixFormat { kTsv, kBinary };

// TSV layout: one header line of tab-separated variable names, then one line
// per sample with p tab-separated decimal values.  Values must be finite.
NamedMatrix read_matrix_tsv(const std::filesystem::path& path);
void write_matrix_tsv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names);

// Binary layout (little-endian): magic "CSEV", uint32 n, uint32 p, uint32
// reserved (0), then n*p float64 values in row-major order.  Variable names
// are synthesized as V1..Vp on read.
NamedMatrix read_matrix_binary(const std::filesystem::path& path);
void write_matrix_binary(const std::filesystem::path& path,
                         const Eigen::MatrixXd& values);

// Dispatch on format.
NamedMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format);

// Default variable names V1..Vp.
std::vector<std::string> default_names(Eigen::Index p);

}  // namespace ubva
