#pragma once

// Approximation problems described by spectral data: a box domain with a
// product reference density, a tensor-product orthonormal basis, and the
// nonincreasing eigenvalue sequence that ranks the basis elements.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace wlsapprox {

using cdouble = std::complex<double>;

/// One-based multi-index in N^d.
using MultiIndex = std::vector<std::uint32_t>;

enum class BasisKind {
  fourier,   ///< exp(2 pi i h x) on [0,1]^d, uniform reference density
  legendre,  ///< normalized Legendre polynomials on [-1,1]^d, density 2^-d
  cosine,    ///< 1, sqrt(2) cos(pi j x) on [0,1]^d, uniform reference density
};

const char* to_string(BasisKind kind) noexcept;
BasisKind basis_kind_from_string(const std::string& name);

/// True when every basis element is real valued.
constexpr bool is_real_basis(BasisKind kind) noexcept { return kind != BasisKind::fourier; }

/// Interval [lo, hi] of one coordinate of the domain.
struct Interval {
  double lo;
  double hi;
};

Interval coordinate_interval(BasisKind kind) noexcept;

/// Value of the (constant) reference density on the d-dimensional box.
double reference_density(BasisKind kind, int d) noexcept;

/// Fourier frequency attached to the univariate index k >= 1: 0, 1, -1, 2, -2, ...
std::int64_t fourier_frequency(std::uint32_t k) noexcept;

/// Eigenvalue weights attached to the multi-indices.
///
/// algebraic:   prod over coordinates of w_nu(k_nu), with w_nu(1) = 1 and
///              w_nu(k) = gamma_nu * k^(-2 alpha) for k >= 2.
/// exponential: A * q^((k_1 - 1) + ... + (k_d - 1)).
struct WeightFamily {
  enum class Kind { algebraic, exponential };

  Kind kind = Kind::algebraic;
  double alpha = 1.0;
  std::vector<double> gamma;  ///< coordinate weights; empty means all ones
  double q = 0.5;
  double A = 1.0;

  static WeightFamily algebraic(double alpha, std::vector<double> gamma = {});
  static WeightFamily exponential(double q, double A = 1.0);

  /// Throws ParameterError when the parameters are invalid for dimension d.
  void validate(int d) const;

  double eigenvalue(std::span<const std::uint32_t> index) const;

  bool operator==(const WeightFamily&) const = default;
};

/// The M largest eigenvalues with the multi-index of each flat position.
struct SpectralData {
  int d = 1;
  std::vector<double> lambdas;     ///< nonincreasing, strictly positive
  std::vector<MultiIndex> order;   ///< order[k-1] is the multi-index of flat index k

  std::size_t size() const noexcept { return lambdas.size(); }

  /// Eigenvalue at one-based flat index k.
  double lambda(std::size_t k) const { return lambdas.at(k - 1); }
};

/// Best-first enumeration of the M largest product eigenvalues.
///
/// Ties are broken by lexicographic order of the multi-indices. Throws
/// ParameterError for invalid weights or M == 0.
SpectralData enumerate_eigenvalues(const WeightFamily& weights, int d, std::size_t M);

/// A fully specified approximation problem.
///
/// Immutable; copies share the enumerated spectrum.
class ProblemInstance {
 public:
  ProblemInstance(BasisKind basis, WeightFamily weights, int d, std::size_t M);

  /// Wraps an already enumerated spectrum.
  ProblemInstance(BasisKind basis, WeightFamily weights, SpectralData spectral);

  BasisKind basis() const noexcept { return basis_; }
  const WeightFamily& weights() const noexcept { return weights_; }
  int dim() const noexcept { return spectral_->d; }
  std::size_t truncation() const noexcept { return spectral_->size(); }
  const SpectralData& spectral() const noexcept { return *spectral_; }
  const MultiIndex& multi_index(std::size_t k) const { return spectral_->order.at(k - 1); }

  double reference_density() const noexcept { return wlsapprox::reference_density(basis_, dim()); }
  bool contains(std::span<const double> x) const noexcept;

  /// Throws DomainError unless x is a point of the domain.
  void require_in_domain(std::span<const double> x) const;

 private:
  BasisKind basis_;
  WeightFamily weights_;
  std::shared_ptr<const SpectralData> spectral_;
};

/// eta_k(x) for each one-based flat index in `indices`.
std::vector<cdouble> eval_basis(const ProblemInstance& instance,
                                std::span<const std::size_t> indices,
                                std::span<const double> x);

/// Real-valued variant for Legendre and cosine bases.
std::vector<double> eval_basis_real(const ProblemInstance& instance,
                                    std::span<const std::size_t> indices,
                                    std::span<const double> x);

/// Writes eta_1(x), ..., eta_m(x) into `out`; no domain check.
template <class Scalar>
void eval_leading_basis(const ProblemInstance& instance, std::span<const double> x,
                        std::span<Scalar> out);

/// Worst-case error sqrt(lambda_{n+1}) of the optimal n-term projection.
///
/// Throws TruncationExceeded when n + 1 exceeds the enumerated length.
double worst_case_error(const SpectralData& spectral, std::size_t n);

/// Finitely supported function sum_k a_k eta_k in coefficient space.
class CoefficientFunction {
 public:
  struct Term {
    std::size_t index;  ///< one-based flat index
    cdouble coeff;
  };

  CoefficientFunction() = default;

  /// Terms are sorted by index; duplicate indices are rejected.
  explicit CoefficientFunction(std::vector<Term> terms);

  /// value * eta_k.
  static CoefficientFunction mode(std::size_t k, cdouble value);

  /// sqrt(lambda_k) * eta_k, which has unit F-norm.
  static CoefficientFunction unit_mode(const SpectralData& spectral, std::size_t k);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Largest flat index with a stored coefficient (0 for the zero function).
  std::size_t max_index() const noexcept { return terms_.empty() ? 0 : terms_.back().index; }

  /// Coefficient at flat index k (zero when absent).
  cdouble coeff(std::size_t k) const noexcept;

  double g_norm_sq() const noexcept;

  /// sum lambda_k^-1 |a_k|^2; throws TruncationExceeded if the support leaves the spectrum.
  double f_norm_sq(const SpectralData& spectral) const;

  /// Point evaluation; x must lie in the domain.
  cdouble evaluate(const ProblemInstance& instance, std::span<const double> x) const;

  bool operator==(const CoefficientFunction& other) const;

 private:
  std::vector<Term> terms_;
};

/// Optimal projection onto span{eta_1, ..., eta_m}: keeps indices <= m.
CoefficientFunction truncation_projection(const CoefficientFunction& f, std::size_t m);

/// f minus its projection onto the first m basis elements.
CoefficientFunction truncation_residual(const CoefficientFunction& f, std::size_t m);

}  // namespace wlsapprox
