#pragma once

// JSON problem configuration, JSON encodings of results, and a small CSV
// writer. Encodings are canonical: equal inputs give byte-identical output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wlsapprox/complexity.hpp"
#include "wlsapprox/error_lab.hpp"
#include "wlsapprox/sampler.hpp"
#include "wlsapprox/spectral_model.hpp"
#include "wlsapprox/tract_probe.hpp"
#include "wlsapprox/wls.hpp"

namespace wlsapprox {

using json = nlohmann::json;

/// Problem configuration document:
///
///   {
///     "basis":   {"kind": "fourier" | "legendre" | "cosine"},
///     "weights": {"kind": "algebraic", "alpha": 1.0, "gamma": [..]}
///              | {"kind": "exponential", "q": 0.5, "A": 1.0},
///     "d": 2,
///     "M": 512,
///     "family":  {"kind": "tensor" | "d_independent" | "flat", "scale": 1.0}
///   }
///
/// "gamma" and "family" are optional. Unknown keys are rejected.
struct ProblemConfig {
  BasisKind basis = BasisKind::legendre;
  WeightFamily weights;
  int d = 1;
  std::size_t M = 1;
  std::optional<SpectrumFamily::Kind> family_kind;
  double family_scale = 1.0;

  /// Enumerates the spectrum. Throws ParameterError on invalid parameters.
  ProblemInstance instance() const;
  /// The dimension family for tractability probes (tensor when unset).
  SpectrumFamily family() const;

  bool operator==(const ProblemConfig&) const = default;
};

json to_json(const ProblemConfig& config);
/// Throws ConfigError on malformed or incomplete documents.
ProblemConfig config_from_json(const json& doc);
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ProblemConfig& config);

json to_json(const Count& c);  ///< number, or "inf"
json to_json(const SampleSet& sample);
SampleSet sample_set_from_json(const json& doc);
json to_json(const WlsModel& model);  ///< coefficients as [re, im] pairs
json to_json(const ErrorEstimate& e);
json to_json(const ConcentrationReport& r);
json to_json(const DecayReport& r);
json to_json(const ComplexityTable& table);
json to_json(const TransferRow& row);
json to_json(const TractabilityReport& r);

/// Shortest round-trip decimal for a double ("inf", "-inf", "nan" otherwise).
std::string format_double(double v);

/// Comma separated table; fields are written verbatim.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& add(const std::string& field);
  CsvWriter& add(double v);
  CsvWriter& add(std::size_t v);
  CsvWriter& add(const Count& c);
  /// Throws ContractViolation when the row width differs from the header.
  void end_row();

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> current_;
};

}  // namespace wlsapprox
