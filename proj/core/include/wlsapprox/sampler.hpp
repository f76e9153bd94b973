#pragma once

// Sampling density omega_m = h_m * rho with h_m = (1/m) sum_{j<=m} |eta_j|^2,
// and iid node generation from it as a uniform mixture of the m product
// densities |eta_j|^2 rho.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wlsapprox/random.hpp"
#include "wlsapprox/spectral_model.hpp"

namespace wlsapprox {

/// Attempt cap for the Legendre envelope rejection sampler, per node.
inline constexpr std::size_t kRejectionAttemptCap = 1'000'000;

class SamplingDensity {
 public:
  /// Throws ParameterError if m is zero or exceeds the truncation.
  SamplingDensity(ProblemInstance instance, std::size_t m);

  const ProblemInstance& instance() const noexcept { return instance_; }
  std::size_t m() const noexcept { return m_; }

  /// h_m(x); no domain check.
  double h(std::span<const double> x) const;

 private:
  ProblemInstance instance_;
  std::size_t m_;
};

/// n nodes stored row-major together with h_m at each node.
struct SampleSet {
  int d = 1;
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> nodes;     ///< n * d coordinates
  std::vector<double> h_values;  ///< h_m(x^i)

  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }

  bool operator==(const SampleSet&) const = default;
};

/// omega_m(x) = h_m(x) rho(x). Throws DomainError outside the box.
double density_eval(const SamplingDensity& density, std::span<const double> x);

/// Draws n iid nodes from the mixture: j uniform in 1..m, then each coordinate
/// from its univariate factor of |eta_j|^2 rho (inverse CDF for Fourier and
/// cosine factors, envelope rejection for Legendre factors).
SampleSet draw_nodes(const SamplingDensity& density, std::size_t n, RandomStream& stream);

/// Draws one coordinate from the univariate density |eta_k(t)|^2 rho_1(t).
double draw_univariate(BasisKind kind, std::uint32_t k, RandomStream& stream);

struct DensityCheck {
  double integral = 0.0;
  double deviation = 0.0;  ///< |integral - 1|
};

/// Tensor Gauss-Legendre quadrature of omega_m over the domain (d <= 3).
DensityCheck validate_density(const SamplingDensity& density, std::size_t points_per_axis);

}  // namespace wlsapprox
