#pragma once

// Finite-grid diagnostics for the algebraic and exponential tractability
// notions. The notions are asymptotic, so every verdict here is a heuristic
// read of a finite table; "inconclusive" is the default when the grid cannot
// discriminate.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wlsapprox/complexity.hpp"
#include "wlsapprox/spectral_model.hpp"

namespace wlsapprox {

/// A dimension-indexed family of spectra.
struct SpectrumFamily {
  enum class Kind {
    tensor,         ///< product weights in dimension d
    d_independent,  ///< the univariate sequence of `weights`, for every d
    flat,           ///< lambda_k = min(1, (2^d / k)^2): 2^d leading ones
  };

  Kind kind = Kind::tensor;
  WeightFamily weights;
  double scale = 1.0;  ///< multiplies every eigenvalue

  /// First M eigenvalues in dimension d. Multi-indices are only meaningful for `tensor`.
  SpectralData spectrum(int d, std::size_t M) const;

  bool operator==(const SpectrumFamily&) const = default;
};

const char* to_string(SpectrumFamily::Kind kind) noexcept;
SpectrumFamily::Kind family_kind_from_string(const std::string& name);

inline constexpr std::size_t kMaxProbeTruncation = std::size_t{1} << 22;

/// n_wor(eps, d) for every grid cell, together with the transfer bounds.
///
/// The truncation is doubled per dimension until the smallest target
/// eps / max(4, A_delta) is resolved or kMaxProbeTruncation is reached;
/// unresolved cells carry the infinite marker.
ComplexityTable probe_grid(const SpectrumFamily& family, std::span<const int> d_grid,
                           std::span<const double> eps_grid, Criterion criterion,
                           double delta = 0.01, double omega = 0.5,
                           std::size_t max_truncation = kMaxProbeTruncation);

enum class Growth { algebraic, exponential };
enum class NotionType { spt, pt, qpt, uwt, wt, st_wt };
enum class Verdict { consistent, inconsistent, inconclusive };

const char* to_string(Verdict v) noexcept;

struct Notion {
  Growth growth = Growth::algebraic;
  NotionType type = NotionType::spt;
  double s = 1.0;  ///< (s,t)-WT parameters
  double t = 1.0;

  std::string name() const;

  /// The twelve notions, (s,t)-WT with the given parameters.
  static std::vector<Notion> all(double s = 1.0, double t = 1.0);
};

/// Verdict of one (alpha, beta) pair of the uniform weak notions.
struct PairVerdict {
  double alpha = 0.0;
  double beta = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct TractabilityReport {
  Notion notion;
  /// Fitted quantities: "C", "p", "q", "t" for the polynomial notions,
  /// "decay" (negative log-log slope of the limit ratio) for the weak ones.
  std::map<std::string, double> exponents;
  double residual = 0.0;  ///< RMS residual of the fit
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> eps_grid;
  std::vector<int> d_grid;
  std::vector<PairVerdict> pairs;  ///< uniform weak notions only
  std::string note;
};

/// Polynomial notions (SPT, PT, QPT): least squares fit of ln n against the
/// notion's regressors on the inner grid (all cells except the smallest eps
/// and the largest d) with nonnegative exponents; the constant is raised so
/// the inequality holds on the inner grid. The verdict is "consistent" iff the
/// fitted inequality, with a factor-2 allowance, also holds on the outer cells;
/// the reported "C" is then raised to cover every cell.
///
/// Weak notions (UWT, WT, (s,t)-WT): the ratio ln n / denominator must
/// decrease towards the outer edge along every grid line in eps and in d;
/// a nondecreasing positive tail on any line is "inconsistent".
TractabilityReport classify(const ComplexityTable& table, const Notion& notion);

/// Parameter set tried for the uniform weak notions.
inline constexpr double kUniformWeakParams[] = {0.5, 1.0, 2.0};

struct TransferRow {
  double eps = 0.0;
  int d = 1;
  Count n_wor;
  Count n_wor_quarter;
  Count n_wor_scaled;
  double mean_bound_log = 0.0;
  double mean_bound_pow = 0.0;
  double prob_bound_log = 0.0;
  double prob_bound_pow = 0.0;
  /// ln(bound) / ln(n_wor); NaN when n_wor < 2 or not finite.
  double ratio_mean_log = 0.0;
  double ratio_mean_pow = 0.0;
  double ratio_prob_log = 0.0;
  double ratio_prob_pow = 0.0;
};

std::vector<TransferRow> transfer_report(const ComplexityTable& table);

/// Human-readable one-line-per-notion summary.
std::string summarize(std::span<const TractabilityReport> reports);

}  // namespace wlsapprox
