#include "wlsapprox/wls.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "wlsapprox/errors.hpp"

namespace wlsapprox {

namespace {

void require_matching_sample(const ProblemInstance& instance, std::size_t m,
                             const SampleSet& X) {
  if (X.m != m)
    throw ContractViolation("sample drawn for m = " + std::to_string(X.m) +
                            " used with m = " + std::to_string(m));
  if (X.d != instance.dim()) throw ContractViolation("sample dimension does not match instance");
  if (X.n < m)
    throw ParameterError("least squares needs n >= m (n = " + std::to_string(X.n) +
                         ", m = " + std::to_string(m) + ")");
  if (X.nodes.size() != X.n * static_cast<std::size_t>(X.d) || X.h_values.size() != X.n)
    throw ContractViolation("sample set storage is inconsistent with n and d");
}

template <class Scalar>
void fill_spectrum(DesignMatrices<Scalar>& design) {
  Eigen::SelfAdjointEigenSolver<typename DesignMatrices<Scalar>::Matrix> es(
      design.H, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  design.min_eig = ev.minCoeff();
  design.max_eig = ev.maxCoeff();
  design.deviation = std::max(std::abs(design.max_eig - 1.0), std::abs(design.min_eig - 1.0));
}

}  // namespace

template <class Scalar>
DesignMatrices<Scalar> assemble(const ProblemInstance& instance, std::size_t m,
                                const SampleSet& X) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (!is_real_basis(instance.basis()))
      throw ParameterError("real design matrices requested for a complex basis");
  }
  if (m == 0) throw ParameterError("m must be at least 1");
  require_matching_sample(instance, m, X);

  DesignMatrices<Scalar> design;
  design.L.resize(static_cast<Eigen::Index>(X.n), static_cast<Eigen::Index>(m));
  std::vector<Scalar> row(m);
  for (std::size_t i = 0; i < X.n; ++i) {
    const double h = X.h_values[i];
    if (!(h > 0.0)) {
      std::ostringstream msg;
      msg << "node " << i << " has h_m = " << h << "; the sampler produced a null node";
      throw DegenerateNode(msg.str());
    }
    eval_leading_basis<Scalar>(instance, X.node(i), row);
    const double scale = 1.0 / std::sqrt(h);
    for (std::size_t j = 0; j < m; ++j)
      design.L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j] * scale;
  }
  design.H = (design.L.adjoint() * design.L) / static_cast<double>(X.n);
  fill_spectrum(design);
  return design;
}

template DesignMatrices<double> assemble<double>(const ProblemInstance&, std::size_t,
                                                 const SampleSet&);
template DesignMatrices<std::complex<double>> assemble<std::complex<double>>(
    const ProblemInstance&, std::size_t, const SampleSet&);

double spectral_deviation(const ProblemInstance& instance, std::size_t m, const SampleSet& X) {
  if (is_real_basis(instance.basis())) return assemble<double>(instance, m, X).deviation;
  return assemble<std::complex<double>>(instance, m, X).deviation;
}

AcceptedSample draw_accepted(const ProblemInstance& instance, std::size_t m, std::size_t n,
                             RandomStream& stream, std::size_t max_retries) {
  if (m == 0) throw ParameterError("m must be at least 1");
  if (n < m) throw ParameterError("draw_accepted needs n >= m");
  const SamplingDensity density(instance, m);
  double last = 0.0;
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    SampleSet X = draw_nodes(density, n, stream);
    last = spectral_deviation(instance, m, X);
    if (last <= kAcceptanceThreshold) return {std::move(X), attempt, last};
  }
  std::ostringstream msg;
  msg << "no sample with ||H - I|| <= 1/2 after " << max_retries
      << " retries (m = " << m << ", n = " << n << ", last deviation " << last
      << "); increase n";
  throw AcceptanceFailure(msg.str(), last);
}

namespace {

template <class Scalar>
WlsModel solve_with(const ProblemInstance& instance, std::size_t m, const SampleSet& X,
                    std::span<const std::complex<double>> values, std::size_t retries) {
  using Matrix = typename DesignMatrices<Scalar>::Matrix;
  DesignMatrices<Scalar> design = assemble<Scalar>(instance, m, X);
  if (!(design.deviation <= kAcceptanceThreshold)) {
    std::ostringstream msg;
    msg << "solve called on a sample with ||H - I|| = " << design.deviation << " > 1/2";
    throw ContractViolation(msg.str());
  }

  const auto n = static_cast<Eigen::Index>(X.n);
  // Real bases fit real and imaginary parts as two right-hand sides.
  constexpr Eigen::Index rhs_cols = std::is_same_v<Scalar, double> ? 2 : 1;
  Matrix rhs(n, rhs_cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = 1.0 / std::sqrt(X.h_values[static_cast<std::size_t>(i)]);
    const std::complex<double> v = values[static_cast<std::size_t>(i)] * scale;
    if constexpr (std::is_same_v<Scalar, double>) {
      rhs(i, 0) = v.real();
      rhs(i, 1) = v.imag();
    } else {
      rhs(i, 0) = v;
    }
  }

  const Eigen::HouseholderQR<Matrix> qr(design.L);
  const Matrix sol = qr.solve(rhs);
  const Matrix residual = rhs - design.L * sol;
  const Matrix normal = design.L.adjoint() * residual;

  WlsModel model;
  model.m = m;
  model.coeffs.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
    if constexpr (std::is_same_v<Scalar, double>)
      model.coeffs(j) = std::complex<double>(sol(j, 0), sol(j, 1));
    else
      model.coeffs(j) = sol(j, 0);
  }
  const double lnorm = design.L.norm();
  const double scale = lnorm * (lnorm * sol.norm() + rhs.norm());
  model.normal_residual = scale > 0.0 ? normal.norm() / scale : 0.0;
  model.deviation = design.deviation;
  model.retries = retries;
  model.condition = std::sqrt(design.max_eig / design.min_eig);
  model.sample = X;
  return model;
}

}  // namespace

WlsModel solve(const ProblemInstance& instance, std::size_t m, const SampleSet& X,
               std::span<const std::complex<double>> values, std::size_t retries) {
  if (values.size() != X.n)
    throw ParameterError("expected " + std::to_string(X.n) + " samples, got " +
                         std::to_string(values.size()));
  if (is_real_basis(instance.basis())) return solve_with<double>(instance, m, X, values, retries);
  return solve_with<std::complex<double>>(instance, m, X, values, retries);
}

std::vector<std::complex<double>> sample_values(const ProblemInstance& instance,
                                                const CoefficientFunction& f,
                                                const SampleSet& X) {
  std::vector<std::complex<double>> out(X.n);
  if (f.empty()) return out;
  if (f.max_index() > instance.truncation())
    throw TruncationExceeded("test function support exceeds the enumerated spectrum");
  std::vector<std::size_t> idx;
  idx.reserve(f.terms().size());
  for (const auto& t : f.terms()) idx.push_back(t.index);
  for (std::size_t i = 0; i < X.n; ++i) {
    const auto values = eval_basis(instance, idx, X.node(i));
    std::complex<double> s{};
    for (std::size_t k = 0; k < idx.size(); ++k) s += f.terms()[k].coeff * values[k];
    out[i] = s;
  }
  return out;
}

WlsModel approximate(const ProblemInstance& instance, const CoefficientFunction& f,
                     std::size_t m, std::size_t n, RandomStream& stream,
                     std::size_t max_retries) {
  AcceptedSample accepted = draw_accepted(instance, m, n, stream, max_retries);
  const auto values = sample_values(instance, f, accepted.sample);
  return solve(instance, m, accepted.sample, values, accepted.retries);
}

template <class Scalar>
InverseNormCheck inverse_norm_bound_check(const DesignMatrices<Scalar>& design) {
  if (!(design.deviation <= kAcceptanceThreshold))
    throw ContractViolation("inverse norm bound requires ||H - I|| <= 1/2");
  using Matrix = typename DesignMatrices<Scalar>::Matrix;
  const Matrix gram = design.L.adjoint() * design.L;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  InverseNormCheck out;
  out.value = 1.0 / es.eigenvalues().minCoeff();
  out.bound = 2.0 / static_cast<double>(design.L.rows());
  out.holds = out.value <= out.bound;
  if (!out.holds) {
    std::ostringstream msg;
    msg << "||(L* L)^-1|| = " << out.value << " exceeds 2/n = " << out.bound
        << " on an accepted sample";
    throw InvariantViolation(msg.str());
  }
  return out;
}

template InverseNormCheck inverse_norm_bound_check<double>(const DesignMatrices<double>&);
template InverseNormCheck inverse_norm_bound_check<std::complex<double>>(
    const DesignMatrices<std::complex<double>>&);

double g_error(const ProblemInstance& instance, const WlsModel& model,
               const CoefficientFunction& f) {
  if (f.max_index() > instance.truncation())
    throw TruncationExceeded("test function support exceeds the enumerated spectrum");
  double s = 0.0;
  for (std::size_t k = 1; k <= model.m; ++k)
    s += std::norm(f.coeff(k) - model.coeffs(static_cast<Eigen::Index>(k - 1)));
  for (const auto& t : f.terms())
    if (t.index > model.m) s += std::norm(t.coeff);
  return std::sqrt(s);
}

}  // namespace wlsapprox
