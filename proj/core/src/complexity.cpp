#include "wlsapprox/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wlsapprox/errors.hpp"

namespace wlsapprox {

namespace {

const double kLn192Sqrt2 = std::log(192.0 * std::numbers::sqrt2);
const double kC14 = 96.0 * std::numbers::sqrt2;

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
}

void require_small_delta(double delta) {
  require_delta(delta);
  if (!(delta < std::exp(-1.0)))
    throw ParameterError("this bound needs delta < 1/e so that ln ln(1/delta) is defined");
}

void require_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ParameterError("omega must be positive");
}

// sup_{x >= 1} (a + ln x) / x^omega; the derivative vanishes at ln x = 1/omega - a.
double sup_log_over_power(double a, double omega) {
  const double log_x = std::max(0.0, 1.0 / omega - a);
  return (a + log_x) * std::exp(-omega * log_x);
}

double offset_2_16_0(double delta) {
  const double l = std::log(1.0 / delta);
  return std::log(48.0) + std::log(l) + l / 4.0;
}

}  // namespace

const char* to_string(Criterion c) noexcept {
  return c == Criterion::absolute ? "abs" : "nor";
}

Criterion criterion_from_string(const std::string& name) {
  if (name == "abs" || name == "ABS") return Criterion::absolute;
  if (name == "nor" || name == "NOR") return Criterion::normalized;
  throw ConfigError("unknown criterion '" + name + "' (expected abs or nor)");
}

double criterion_value(const SpectralData& spectral, Criterion c) {
  return c == Criterion::absolute ? 1.0 : std::sqrt(spectral.lambda(1));
}

std::uint64_t Count::value() const {
  if (!finite_) throw TruncationExceeded("complexity not resolved within the truncation");
  return value_;
}

std::size_t m_of_n(std::size_t n, double delta) {
  if (n == 0) throw ParameterError("n must be at least 1");
  require_delta(delta);
  const auto nd = static_cast<double>(n);
  const double denom = 48.0 * (std::numbers::sqrt2 * std::log(2.0 * nd) - std::log(delta));
  return static_cast<std::size_t>(std::floor(nd / denom));
}

double a_delta(double delta) {
  require_delta(delta);
  return std::sqrt(1.0 + 1.0 / (12.0 * std::log(1.0 / delta))) / std::sqrt(1.0 - delta);
}

Count n_wor(const SpectralData& spectral, double eps, Criterion criterion) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const double target = eps * criterion_value(spectral, criterion);
  // lambdas is nonincreasing, so "sqrt(lambda) > target" is a prefix.
  const auto it = std::partition_point(spectral.lambdas.begin(), spectral.lambdas.end(),
                                       [&](double l) { return std::sqrt(l) > target; });
  if (it == spectral.lambdas.end()) return Count::infinite();
  return Count(static_cast<std::uint64_t>(it - spectral.lambdas.begin()));
}

double mean_bound_log(Count x) {
  if (!x.is_finite()) return x.as_double();
  const double xp1 = x.as_double() + 1.0;
  return std::ceil(kC14 * xp1 * (std::log(xp1) + kLn192Sqrt2));
}

double prob_bound_log(Count x, double delta) {
  require_small_delta(delta);
  if (!x.is_finite()) return x.as_double();
  const double xp1 = x.as_double() + 1.0;
  const double l = std::log(1.0 / delta);
  return std::ceil(48.0 * (4.0 * (std::log(48.0) + std::log(l) + std::log(xp1)) + l) * xp1);
}

double c_omega(double omega) {
  require_omega(omega);
  return kC14 * sup_log_over_power(kLn192Sqrt2, omega);
}

double c_omega_delta(double omega, double delta) {
  require_omega(omega);
  require_small_delta(delta);
  // 48 (4 (ln48 + lnln(1/delta) + ln x) + ln(1/delta)) = 192 (a + ln x)
  return 192.0 * sup_log_over_power(offset_2_16_0(delta), omega);
}

double mean_bound_pow(Count x, double omega) {
  const double c = c_omega(omega);
  if (!x.is_finite()) return x.as_double();
  return std::ceil(c * std::pow(x.as_double() + 1.0, 1.0 + omega));
}

double prob_bound_pow(Count x, double omega, double delta) {
  const double c = c_omega_delta(omega, delta);
  if (!x.is_finite()) return x.as_double();
  return std::ceil(c * std::pow(x.as_double() + 1.0, 1.0 + omega));
}

ComplexityTable complexity_table(const SpectralData& spectral, std::span<const double> eps_grid,
                                 Criterion criterion, double delta, double omega) {
  require_small_delta(delta);
  require_omega(omega);
  ComplexityTable table;
  table.criterion = criterion;
  table.delta = delta;
  table.omega = omega;
  append_rows(table, spectral, eps_grid);
  return table;
}

void append_rows(ComplexityTable& table, const SpectralData& spectral,
                 std::span<const double> eps_grid) {
  const double scale = a_delta(table.delta);
  for (double eps : eps_grid) {
    ComplexityRow row;
    row.eps = eps;
    row.d = spectral.d;
    row.n_wor = n_wor(spectral, eps, table.criterion);
    row.n_wor_quarter = n_wor(spectral, eps / 4.0, table.criterion);
    row.n_wor_scaled = n_wor(spectral, eps / scale, table.criterion);
    row.mean_bound_log = mean_bound_log(row.n_wor_quarter);
    row.prob_bound_log = prob_bound_log(row.n_wor_scaled, table.delta);
    row.mean_bound_pow = mean_bound_pow(row.n_wor_quarter, table.omega);
    row.prob_bound_pow = prob_bound_pow(row.n_wor_scaled, table.omega, table.delta);
    table.rows.push_back(row);
  }
}

}  // namespace wlsapprox
