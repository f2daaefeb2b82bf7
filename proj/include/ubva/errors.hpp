#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ubva {

// Every library error carries a short stable code (machine-matchable) plus a
// human message.  The two branches below decide the CLI exit status: input /
// usage problems exit with 2, numerical failures with 1.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// A problem with caller-supplied data or parameters (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

// A failure of the numerical machinery itself (CLI exit code 1).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// ------------------------------------------------------------------ specific

class ConstantVectorError final : public InputError {
 public:
  ConstantVectorError(std::size_t index, const std::string& what_vector)
      : InputError("ConstantVector",
                   what_vector + " " + std::to_string(index) +
                       " is constant; it cannot be standardized"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DimensionTooSmallError final : public InputError {
 public:
  explicit DimensionTooSmallError(const std::string& message)
      : InputError("DimensionTooSmall", message) {}
};

class InvalidParameterError final : public InputError {
 public:
  explicit InvalidParameterError(const std::string& message)
      : InputError("InvalidParameter", message) {}
};

class IndexOutOfRangeError final : public InputError {
 public:
  explicit IndexOutOfRangeError(const std::string& message)
      : InputError("IndexOutOfRange", message) {}
};

// Requested a data-rich-only quantity (e.g. VIF) in the high-dimensional
// regime n <= p.
class RegimeError final : public InputError {
 public:
  explicit RegimeError(const std::string& message)
      : InputError("RegimeError", message) {}
};

class RankDeficientError final : public InputError {
 public:
  explicit RankDeficientError(const std::string& message)
      : InputError("RankDeficient", message) {}
};

class NotSymmetricError final : public InputError {
 public:
  explicit NotSymmetricError(const std::string& message)
      : InputError("NotSymmetric", message) {}
};

class NotPsdError final : public InputError {
 public:
  explicit NotPsdError(const std::string& message)
      : InputError("NotPSD", message) {}
};

class InfeasibleError final : public InputError {
 public:
  explicit InfeasibleError(const std::string& message)
      : InputError("Infeasible", message) {}
};

class ParseError final : public InputError {
 public:
  ParseError(const std::string& file, std::size_t line,
             const std::string& message)
      : InputError("ParseError",
                   file + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError final : public InputError {
 public:
  explicit IoError(const std::string& message) : InputError("IoError", message) {}
};

class EmptyPanelError final : public InputError {
 public:
  explicit EmptyPanelError(const std::string& message)
      : InputError("EmptyPanel", message) {}
};

class DuplicateSnpIdError final : public InputError {
 public:
  explicit DuplicateSnpIdError(const std::string& snp_id)
      : InputError("DuplicateSnpId", "SNP id '" + snp_id + "' appears twice") {}
};

class AllMissingError final : public InputError {
 public:
  explicit AllMissingError(std::size_t index)
      : InputError("AllMissing", "SNP column " + std::to_string(index) +
                                     " has no observed genotypes"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class MissingDataError final : public InputError {
 public:
  explicit MissingDataError(const std::string& message)
      : InputError("MissingData", message) {}
};

class ChromosomeTooSmallError final : public InputError {
 public:
  explicit ChromosomeTooSmallError(const std::string& label, std::size_t count)
      : InputError("ChromosomeTooSmall",
                   "chromosome '" + label + "' has " + std::to_string(count) +
                       " SNP(s) after filtering; at least 2 are required") {}
};

class KTooLargeError final : public InputError {
 public:
  explicit KTooLargeError(const std::string& message)
      : InputError("KTooLarge", message) {}
};

// SVD / eigensolver did not converge, or produced unusable output.
class NumericalFailureError final : public NumericalError {
 public:
  explicit NumericalFailureError(const std::string& message)
      : NumericalError("NumericalFailure", message) {}
};

}  // namespace ubva
