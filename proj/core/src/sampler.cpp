#include "wlsapprox/sampler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wlsapprox/errors.hpp"
#include "wlsapprox/quadrature.hpp"

namespace wlsapprox {

SamplingDensity::SamplingDensity(ProblemInstance instance, std::size_t m)
    : instance_(std::move(instance)), m_(m) {
  if (m_ == 0) throw ParameterError("mixture size m must be at least 1");
  if (m_ > instance_.truncation())
    throw TruncationExceeded("mixture size m = " + std::to_string(m_) +
                             " exceeds the truncation M = " +
                             std::to_string(instance_.truncation()));
}

double SamplingDensity::h(std::span<const double> x) const {
  double s = 0.0;
  if (is_real_basis(instance_.basis())) {
    std::vector<double> v(m_);
    eval_leading_basis<double>(instance_, x, v);
    for (double e : v) s += e * e;
  } else {
    // |eta_j| = 1 for every Fourier element.
    return 1.0;
  }
  return s / static_cast<double>(m_);
}

double density_eval(const SamplingDensity& density, std::span<const double> x) {
  density.instance().require_in_domain(x);
  return density.h(x) * density.instance().reference_density();
}

namespace {

// Inverse of F(t) = t + sin(2 pi j t) / (2 pi j), the CDF of 1 + cos(2 pi j t) on [0,1].
double cosine_inverse_cdf(std::uint32_t j, double u) {
  const double w = 2.0 * std::numbers::pi * static_cast<double>(j);
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid + std::sin(w * mid) / w < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double legendre_squared_normalized(std::uint32_t deg, double t) {
  double p_prev = 1.0;
  double p = t;
  if (deg == 0) return 1.0;
  for (std::uint32_t j = 1; j < deg; ++j) {
    const double jd = static_cast<double>(j);
    const double next = ((2.0 * jd + 1.0) * t * p - jd * p_prev) / (jd + 1.0);
    p_prev = p;
    p = next;
  }
  return p * p;
}

}  // namespace

double draw_univariate(BasisKind kind, std::uint32_t k, RandomStream& stream) {
  switch (kind) {
    case BasisKind::fourier:
      return stream.uniform();
    case BasisKind::cosine:
      if (k == 1) return stream.uniform();
      return cosine_inverse_cdf(k - 1, stream.uniform());
    case BasisKind::legendre: {
      if (k == 1) return stream.uniform(-1.0, 1.0);
      // Target (2 deg + 1) P_deg(t)^2 / 2 on [-1,1]; proposal uniform with
      // envelope (2 deg + 1)/2, so the acceptance ratio is P_deg(t)^2.
      const std::uint32_t deg = k - 1;
      for (std::size_t attempt = 0; attempt < kRejectionAttemptCap; ++attempt) {
        const double t = stream.uniform(-1.0, 1.0);
        if (stream.uniform() < legendre_squared_normalized(deg, t)) return t;
      }
      throw SamplingError("rejection sampler for the Legendre component of degree " +
                          std::to_string(deg) + " exhausted " +
                          std::to_string(kRejectionAttemptCap) + " attempts");
    }
  }
  throw SamplingError("unknown basis kind");
}

SampleSet draw_nodes(const SamplingDensity& density, std::size_t n, RandomStream& stream) {
  if (n == 0) throw ParameterError("draw_nodes needs n >= 1");
  const ProblemInstance& instance = density.instance();
  const auto d = static_cast<std::size_t>(instance.dim());

  SampleSet out;
  out.d = instance.dim();
  out.m = density.m();
  out.n = n;
  out.seed = stream.seed();
  out.nodes.resize(n * d);
  out.h_values.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = 1 + stream.below(density.m());
    const MultiIndex& component = instance.multi_index(j);
    double* x = out.nodes.data() + i * d;
    for (std::size_t nu = 0; nu < d; ++nu)
      x[nu] = draw_univariate(instance.basis(), component[nu], stream);
    out.h_values[i] = density.h(std::span<const double>(x, d));
  }
  return out;
}

DensityCheck validate_density(const SamplingDensity& density, std::size_t points_per_axis) {
  const ProblemInstance& instance = density.instance();
  if (instance.dim() > 3) throw ParameterError("density validation supports d <= 3");
  const Interval box = coordinate_interval(instance.basis());
  const QuadratureRule rule = gauss_legendre(points_per_axis, box.lo, box.hi);
  const double rho = instance.reference_density();
  DensityCheck out;
  out.integral = tensor_integrate(rule, instance.dim(), [&](std::span<const double> x) {
    return density.h(x) * rho;
  });
  out.deviation = std::abs(out.integral - 1.0);
  return out;
}

}  // namespace wlsapprox
