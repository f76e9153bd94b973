#pragma once

// Weighted least squares on random nodes: the scaled design matrix
// L = [eta_j(x^i) / sqrt(h_m(x^i))], the empirical Gram matrix H = L* L / n,
// the acceptance test ||H - I|| <= 1/2 with resampling, and the solve.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "wlsapprox/random.hpp"
#include "wlsapprox/sampler.hpp"
#include "wlsapprox/spectral_model.hpp"

namespace wlsapprox {

/// Acceptance threshold on ||H - I||; fixed, not configurable.
inline constexpr double kAcceptanceThreshold = 0.5;
inline constexpr std::size_t kDefaultMaxRetries = 100;

template <class Scalar>
struct DesignMatrices {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix L;               ///< n x m
  Matrix H;               ///< m x m, (1/n) L* L
  double deviation = 0.0; ///< spectral norm of H - I
  double min_eig = 0.0;   ///< smallest eigenvalue of H
  double max_eig = 0.0;   ///< largest eigenvalue of H
};

using RealDesign = DesignMatrices<double>;
using ComplexDesign = DesignMatrices<std::complex<double>>;

/// Builds L, H and ||H - I|| (dense Hermitian eigendecomposition).
///
/// The real instantiation rejects the Fourier basis. Throws DegenerateNode on
/// a node with h_m = 0 and ContractViolation if X was drawn for another m.
template <class Scalar>
DesignMatrices<Scalar> assemble(const ProblemInstance& instance, std::size_t m,
                                const SampleSet& X);

/// ||H - I|| for the sample, dispatching on the basis scalar type.
double spectral_deviation(const ProblemInstance& instance, std::size_t m, const SampleSet& X);

struct AcceptedSample {
  SampleSet sample;
  std::size_t retries = 0;  ///< number of discarded draws
  double deviation = 0.0;
};

/// Draws n-node sets until ||H - I|| <= 1/2.
///
/// Throws AcceptanceFailure (with the last deviation) after max_retries
/// discarded draws.
AcceptedSample draw_accepted(const ProblemInstance& instance, std::size_t m, std::size_t n,
                             RandomStream& stream,
                             std::size_t max_retries = kDefaultMaxRetries);

struct WlsModel {
  std::size_t m = 0;
  Eigen::VectorXcd coeffs;     ///< coefficients of eta_1..eta_m
  double deviation = 0.0;      ///< ||H - I|| of the accepted sample
  std::size_t retries = 0;
  double condition = 0.0;      ///< sqrt(max_eig / min_eig) of H, the condition number of L
  double normal_residual = 0.0;///< relative residual of the normal equations
  SampleSet sample;
};

/// Weighted samples f(x^i) and least squares fit via Householder QR of L.
///
/// Throws ContractViolation when the sample does not pass the acceptance test.
WlsModel solve(const ProblemInstance& instance, std::size_t m, const SampleSet& X,
               std::span<const std::complex<double>> values, std::size_t retries = 0);

/// f(x^i) for every node of X.
std::vector<std::complex<double>> sample_values(const ProblemInstance& instance,
                                                const CoefficientFunction& f,
                                                const SampleSet& X);

/// Convenience: draw_accepted + sample_values + solve.
WlsModel approximate(const ProblemInstance& instance, const CoefficientFunction& f,
                     std::size_t m, std::size_t n, RandomStream& stream,
                     std::size_t max_retries = kDefaultMaxRetries);

struct InverseNormCheck {
  bool holds = false;
  double value = 0.0;  ///< ||(L* L)^-1||
  double bound = 0.0;  ///< 2 / n
};

/// Computes ||(L* L)^-1|| = 1 / lambda_min(L* L) and compares it against 2/n.
///
/// Throws ContractViolation if the design is not accepted and
/// InvariantViolation if the bound fails.
template <class Scalar>
InverseNormCheck inverse_norm_bound_check(const DesignMatrices<Scalar>& design);

/// ||f - S f||_G evaluated exactly in coefficient space.
double g_error(const ProblemInstance& instance, const WlsModel& model,
               const CoefficientFunction& f);

}  // namespace wlsapprox
