#pragma once

// Information complexity of the worst-case Lambda^all problem read off the
// eigenvalues, and the upper bounds it implies for the randomized
// Lambda^std problem solved by weighted least squares.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wlsapprox/spectral_model.hpp"

namespace wlsapprox {

enum class Criterion { absolute, normalized };

const char* to_string(Criterion c) noexcept;
Criterion criterion_from_string(const std::string& name);

/// CRI_d: 1 for the absolute criterion, sqrt(lambda_1) for the normalized one.
double criterion_value(const SpectralData& spectral, Criterion c);

/// A cardinality, or the marker "not resolved within the truncation".
class Count {
 public:
  constexpr Count() = default;
  constexpr explicit Count(std::uint64_t v) : value_(v), finite_(true) {}
  static constexpr Count infinite() { return Count{}; }

  constexpr bool is_finite() const noexcept { return finite_; }
  /// Throws TruncationExceeded on the marker.
  std::uint64_t value() const;
  /// +inf for the marker.
  double as_double() const noexcept {
    return finite_ ? static_cast<double>(value_) : std::numeric_limits<double>::infinity();
  }
  std::string str() const { return finite_ ? std::to_string(value_) : "inf"; }

  constexpr bool operator==(const Count&) const = default;

 private:
  std::uint64_t value_ = 0;
  bool finite_ = false;
};

/// m = floor(n / (48 (sqrt(2) ln(2n) - ln delta))); may be 0.
std::size_t m_of_n(std::size_t n, double delta);

/// A_delta = (1 + 1/(12 ln(1/delta)))^(1/2) (1 - delta)^(-1/2).
double a_delta(double delta);

/// Smallest n with sqrt(lambda_{n+1}) <= eps * CRI_d, by binary search.
/// Returns the infinite marker when even n = M - 1 misses the target.
Count n_wor(const SpectralData& spectral, double eps, Criterion criterion);

/// ceil(96 sqrt2 (x+1) (ln(x+1) + ln(192 sqrt2))), x = n_wor(eps/4).
double mean_bound_log(Count n_wor_quarter);

/// ceil(48 (4 (ln 48 + ln ln(1/delta) + ln(x+1)) + ln(1/delta)) (x+1)),
/// x = n_wor(eps / A_delta). Needs delta < 1/e.
double prob_bound_log(Count n_wor_scaled, double delta);

/// sup_{x>=1} 96 sqrt2 (ln x + ln(192 sqrt2)) / x^omega, in closed form.
double c_omega(double omega);

/// sup_{x>=1} 48 (4 (ln 48 + ln ln(1/delta) + ln x) + ln(1/delta)) / x^omega.
double c_omega_delta(double omega, double delta);

/// ceil(C_omega (x+1)^(1+omega)).
double mean_bound_pow(Count n_wor_quarter, double omega);

/// ceil(C_{omega,delta} (x+1)^(1+omega)).
double prob_bound_pow(Count n_wor_scaled, double omega, double delta);

struct ComplexityRow {
  double eps = 0.0;
  int d = 1;
  Count n_wor;
  Count n_wor_quarter;  ///< n_wor(eps / 4)
  Count n_wor_scaled;   ///< n_wor(eps / A_delta)
  double mean_bound_log = 0.0;
  double prob_bound_log = 0.0;
  double mean_bound_pow = 0.0;
  double prob_bound_pow = 0.0;
};

struct ComplexityTable {
  Criterion criterion = Criterion::absolute;
  double delta = 0.01;
  double omega = 0.5;
  std::vector<ComplexityRow> rows;
};

/// One row per eps for a single spectrum. Throws ParameterError unless
/// delta < 1/e and omega > 0.
ComplexityTable complexity_table(const SpectralData& spectral, std::span<const double> eps_grid,
                                 Criterion criterion, double delta, double omega);

/// Appends the rows of one spectrum to an existing table.
void append_rows(ComplexityTable& table, const SpectralData& spectral,
                 std::span<const double> eps_grid);

}  // namespace wlsapprox
