#ifndef KMSA_ERRORS_HPP
#define KMSA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace kmsa {

/// Broad failure category. The CLI maps these onto its exit codes.
enum class ErrorKind {
  kConfig,
  kNumeric,
  kGraph,
  kDimension,
  kWeightDomain,
  kEval,
  kIo,
  kFormat,
  kVersion,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Machine-readable reason for a rejected configuration or dataset.
enum class ConfigReason {
  kNoViews,
  kTooFewSamples,
  kSampleCountMismatch,
  kEmptyView,
  kNonFiniteFeature,
  kLabelCountMismatch,
  kViewNameCountMismatch,
  kDimensionNotPositive,
  kDimensionExceedsSamples,
  kExponentTooSmall,
  kKappaNegative,
  kEtaNotNegative,
  kMaxItersNegative,
  kTolNotPositive,
  kRidgeNegative,
  kKernelCountMismatch,
  kBandwidthNotPositive,
  kPolyDegreeInvalid,
  kPolyOffsetNegative,
  kGraphCountMismatch,
  kLppNeighborsInvalid,
  kLppHeatNotPositive,
  kLdaRequiresLabels,
  kSppLambdaNotPositive,
  kSppItersNotPositive,
};

/// Stable snake_case identifier, e.g. "eta_not_negative".
const char* to_string(ConfigReason reason);

struct ConfigViolation {
  ConfigReason reason;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigViolation> violations);

  const std::vector<ConfigViolation>& violations() const noexcept {
    return violations_;
  }
  bool has(ConfigReason reason) const noexcept;

 private:
  std::vector<ConfigViolation> violations_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error(ErrorKind::kNumeric, m) {}
};

class GraphError : public Error {
 public:
  explicit GraphError(const std::string& m) : Error(ErrorKind::kGraph, m) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& m)
      : Error(ErrorKind::kDimension, m) {}
};

/// Raised when the closed-form weight update sees a non-positive trace term.
class WeightDomainError : public Error {
 public:
  explicit WeightDomainError(const std::string& m)
      : Error(ErrorKind::kWeightDomain, m) {}
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& m) : Error(ErrorKind::kEval, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& m) : Error(ErrorKind::kFormat, m) {}
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& m)
      : Error(ErrorKind::kVersion, m) {}
};

}  // namespace kmsa

#endif  // KMSA_ERRORS_HPP
