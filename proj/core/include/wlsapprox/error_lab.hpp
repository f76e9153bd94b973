#pragma once

// Monte Carlo checks of the randomized error bound, the matrix concentration
// inequality for the empirical Gram matrix, and the exponential-decay bound.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wlsapprox/random.hpp"
#include "wlsapprox/spectral_model.hpp"
#include "wlsapprox/wls.hpp"

namespace wlsapprox {

/// Statistical slack used by every expectation check.
inline constexpr double kSigmaSlack = 3.0;

inline constexpr std::size_t kDefaultErrorReplications = 200;
inline constexpr std::size_t kDefaultConcentrationReplications = 2000;

struct ErrorEstimate {
  std::string label;        ///< test function label
  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.0;
  std::size_t R = 0;
  double mean_sq = 0.0;     ///< mean of ||f - S f||_G^2 over replications
  double std_err = 0.0;
  double bound_sq = 0.0;    ///< (1 + 4m/n) / (1 - delta) * lambda_{m+1}
  double retries_mean = 0.0;

  bool within_bound(double sigmas = kSigmaSlack) const {
    return mean_sq <= bound_sq + sigmas * std_err;
  }
};

struct LabeledFunction {
  std::string label;
  CoefficientFunction f;
};

/// Unit-F-norm modes sqrt(lambda_k) eta_k for k in {1, m, m+1, m+2, 2m, M}
/// (deduplicated, clipped to 1..M) plus, when `with_random`, one random
/// function of unit F-norm supported on 1..M.
std::vector<LabeledFunction> test_battery(const ProblemInstance& instance, std::size_t m,
                                          RandomStream& stream, bool with_random = true);

/// Random function with unit F-norm: a_k = sqrt(lambda_k) z_k, z uniform on the sphere.
CoefficientFunction random_unit_function(const ProblemInstance& instance,
                                         std::size_t support, RandomStream& stream);

/// (1 + 4m/n)^(1/2) (1 - delta)^(-1/2) sqrt(lambda_{m+1}) with m = m_of_n(n, delta).
double expected_error_bound(const SpectralData& spectral, std::size_t n, double delta);

struct ExperimentOptions {
  unsigned threads = 1;
  std::size_t max_retries = kDefaultMaxRetries;
};

/// R independent accept-solve pipelines (replication r uses stream.substream(r))
/// shared across all functions; one estimate per function.
std::vector<ErrorEstimate> randomized_error_battery(const ProblemInstance& instance,
                                                    std::span<const LabeledFunction> functions,
                                                    std::size_t n, double delta, std::size_t R,
                                                    const RandomStream& stream,
                                                    const ExperimentOptions& options = {});

/// Single-function version. Throws ParameterError when m_of_n(n, delta) = 0
/// or when the function has F-norm above 1.
ErrorEstimate randomized_error_mc(const ProblemInstance& instance, const CoefficientFunction& f,
                                  std::size_t n, double delta, std::size_t R,
                                  const RandomStream& stream,
                                  const ExperimentOptions& options = {});

struct ConcentrationReport {
  std::size_t m = 0;
  std::size_t n = 0;
  double t = 0.0;
  std::size_t R = 0;
  std::size_t exceed_count = 0;
  double empirical_prob = 0.0;
  double raw_bound = 0.0;  ///< (2n)^sqrt2 exp(-n t^2 / (12 m)), possibly > 1
  double bound = 0.0;      ///< min(1, raw_bound)

  bool holds() const { return empirical_prob <= bound; }
};

/// (2n)^sqrt2 exp(-n t^2 / (12 m)).
double concentration_bound(std::size_t m, std::size_t n, double t);

/// R unconditioned draws; one report per threshold, all thresholds sharing the draws.
std::vector<ConcentrationReport> concentration_experiment(const ProblemInstance& instance,
                                                          std::size_t m, std::size_t n,
                                                          std::span<const double> thresholds,
                                                          std::size_t R,
                                                          const RandomStream& stream,
                                                          unsigned threads = 1);

ConcentrationReport concentration_experiment(const ProblemInstance& instance, std::size_t m,
                                             std::size_t n, double t, std::size_t R,
                                             const RandomStream& stream, unsigned threads = 1);

/// Empirical mean of H over R draws with its entrywise standard error.
struct GramMeanReport {
  Eigen::MatrixXcd mean;
  Eigen::MatrixXd std_err;
  /// max over entries of |mean - I| - sigmas * std_err (<= 0 passes)
  double worst_excess(double sigmas) const;
};

GramMeanReport gram_mean_experiment(const ProblemInstance& instance, std::size_t m,
                                    std::size_t n, std::size_t R, const RandomStream& stream,
                                    unsigned threads = 1);

/// delta implicit in m = floor(n / (48 sqrt2 ln(4n))): 2^-sqrt2.
double decay_delta();

struct DecayRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::string worst_label;
  double mean_sq = 0.0;      ///< largest mean squared error over the mode battery
  double std_err = 0.0;
  double error_estimate = 0.0;  ///< sqrt(mean_sq)
  double bound_wor = 0.0;   ///< 4 sqrt(lambda_{m+1})
  double bound_geometric = 0.0;   ///< 4 A' q2^(n / ln(4n)) sqrt(lambda_1)
  double retries_mean = 0.0;

  /// mean_sq <= bound_wor^2 + 3 std_err
  bool holds(double sigmas = kSigmaSlack) const {
    return mean_sq <= bound_wor * bound_wor + sigmas * std_err;
  }
};

struct DecayReport {
  double q = 0.0;        ///< eigenvalue ratio of the weight family
  double A = 0.0;
  double q_error = 0.0;  ///< q' with sqrt(lambda_{n+1}) <= A' q'^(n+1) sqrt(lambda_1)
  double A_error = 0.0;  ///< A' >= 1 (smallest valid over the truncation)
  double q2 = 0.0;       ///< q'^(1 / (48 sqrt2))
  std::size_t R = 0;
  std::vector<DecayRow> rows;

  bool curves_ordered() const;
  bool all_hold() const;
};

/// For each n: m from the decay formula, MC error of the mode battery,
/// and both bound curves. Rows with m = 0 use the zero approximant, whose
/// error is exactly ||f||_G. Throws ParameterError for non-exponential weights.
DecayReport exp_decay_check(const ProblemInstance& instance, std::span<const std::size_t> n_grid,
                            std::size_t R, const RandomStream& stream,
                            const ExperimentOptions& options = {});

}  // namespace wlsapprox
