#include "wlsapprox/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <type_traits>

#include "wlsapprox/errors.hpp"

namespace wlsapprox {

const char* to_string(BasisKind kind) noexcept {
  switch (kind) {
    case BasisKind::fourier: return "fourier";
    case BasisKind::legendre: return "legendre";
    case BasisKind::cosine: return "cosine";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "fourier") return BasisKind::fourier;
  if (name == "legendre") return BasisKind::legendre;
  if (name == "cosine") return BasisKind::cosine;
  throw ConfigError("unknown basis kind '" + name + "'");
}

Interval coordinate_interval(BasisKind kind) noexcept {
  return kind == BasisKind::legendre ? Interval{-1.0, 1.0} : Interval{0.0, 1.0};
}

double reference_density(BasisKind kind, int d) noexcept {
  return kind == BasisKind::legendre ? std::ldexp(1.0, -d) : 1.0;
}

std::int64_t fourier_frequency(std::uint32_t k) noexcept {
  const auto kk = static_cast<std::int64_t>(k);
  return kk % 2 == 0 ? kk / 2 : -(kk - 1) / 2;
}

// ---------------------------------------------------------------------------
// weights

WeightFamily WeightFamily::algebraic(double alpha, std::vector<double> gamma) {
  WeightFamily w;
  w.kind = Kind::algebraic;
  w.alpha = alpha;
  w.gamma = std::move(gamma);
  return w;
}

WeightFamily WeightFamily::exponential(double q, double A) {
  WeightFamily w;
  w.kind = Kind::exponential;
  w.q = q;
  w.A = A;
  return w;
}

void WeightFamily::validate(int d) const {
  if (d < 1) throw ParameterError("dimension must be positive");
  if (kind == Kind::algebraic) {
    if (!(alpha > 0.5) || !std::isfinite(alpha))
      throw ParameterError("algebraic weights need alpha > 1/2");
    if (!gamma.empty()) {
      if (gamma.size() < static_cast<std::size_t>(d))
        throw ParameterError("coordinate weights gamma must have at least d entries");
      for (double g : gamma)
        if (!(g > 0.0 && g <= 1.0))
          throw ParameterError("coordinate weights gamma must lie in (0, 1]");
    }
  } else {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("exponential weights need q in (0, 1)");
    if (!(A >= 1.0) || !std::isfinite(A)) throw ParameterError("exponential weights need A >= 1");
  }
}

double WeightFamily::eigenvalue(std::span<const std::uint32_t> index) const {
  if (kind == Kind::exponential) {
    double excess = 0.0;
    for (auto k : index) excess += static_cast<double>(k - 1);
    return A * std::pow(q, excess);
  }
  // Integer product first so permuted multi-indices give bit-identical values.
  double prod_k = 1.0;
  double prod_gamma = 1.0;
  for (std::size_t nu = 0; nu < index.size(); ++nu) {
    prod_k *= static_cast<double>(index[nu]);
    if (index[nu] >= 2 && !gamma.empty()) prod_gamma *= gamma[nu];
  }
  return prod_gamma * std::pow(prod_k, -2.0 * alpha);
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct Candidate {
  double lambda;
  MultiIndex index;
  std::size_t last_active;  // one past the last coordinate with k > 1
};

// Priority: larger eigenvalue first, then lexicographically smaller index.
struct LaterInOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return b.index < a.index;
  }
};

}  // namespace

SpectralData enumerate_eigenvalues(const WeightFamily& weights, int d, std::size_t M) {
  weights.validate(d);
  if (M == 0) throw ParameterError("truncation length M must be at least 1");

  SpectralData out;
  out.d = d;
  out.lambdas.reserve(M);
  out.order.reserve(M);

  // Each multi-index is pushed only by the parent obtained by decrementing its
  // last active coordinate, so no visited set is needed. Parents precede
  // children in the priority order, which keeps the best-first scan exact.
  std::priority_queue<Candidate, std::vector<Candidate>, LaterInOrder> frontier;
  MultiIndex ones(static_cast<std::size_t>(d), 1U);
  frontier.push({weights.eigenvalue(ones), ones, 0});

  while (out.lambdas.size() < M && !frontier.empty()) {
    Candidate top = frontier.top();
    frontier.pop();
    const std::size_t start = top.last_active == 0 ? 0 : top.last_active - 1;
    for (std::size_t nu = start; nu < static_cast<std::size_t>(d); ++nu) {
      Candidate child{0.0, top.index, nu + 1};
      ++child.index[nu];
      child.lambda = weights.eigenvalue(child.index);
      if (child.lambda > 0.0) frontier.push(std::move(child));
    }
    out.lambdas.push_back(top.lambda);
    out.order.push_back(std::move(top.index));
  }
  if (out.lambdas.size() < M || !(out.lambdas.back() > 0.0))
    throw ParameterError("eigenvalues underflow before reaching the requested truncation");
  return out;
}

// ---------------------------------------------------------------------------
// instance

ProblemInstance::ProblemInstance(BasisKind basis, WeightFamily weights, int d, std::size_t M)
    : basis_(basis),
      weights_(std::move(weights)),
      spectral_(std::make_shared<const SpectralData>(enumerate_eigenvalues(weights_, d, M))) {}

ProblemInstance::ProblemInstance(BasisKind basis, WeightFamily weights, SpectralData spectral)
    : basis_(basis),
      weights_(std::move(weights)),
      spectral_(std::make_shared<const SpectralData>(std::move(spectral))) {
  if (spectral_->size() == 0) throw ParameterError("empty spectrum");
  if (spectral_->order.size() != spectral_->size())
    throw ParameterError("spectrum needs one multi-index per eigenvalue");
}

bool ProblemInstance::contains(std::span<const double> x) const noexcept {
  if (x.size() != static_cast<std::size_t>(dim())) return false;
  const Interval box = coordinate_interval(basis_);
  return std::all_of(x.begin(), x.end(),
                     [&](double t) { return t >= box.lo && t <= box.hi; });
}

void ProblemInstance::require_in_domain(std::span<const double> x) const {
  if (contains(x)) return;
  std::ostringstream msg;
  const Interval box = coordinate_interval(basis_);
  msg << "point (";
  for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
  msg << ") is outside [" << box.lo << ", " << box.hi << "]^" << dim();
  throw DomainError(msg.str());
}

// ---------------------------------------------------------------------------
// basis evaluation

namespace {

template <class Scalar>
void univariate_values(BasisKind kind, double t, std::uint32_t kmax, Scalar* out) {
  using std::numbers::pi;
  switch (kind) {
    case BasisKind::fourier:
      if constexpr (std::is_same_v<Scalar, cdouble>) {
        for (std::uint32_t k = 1; k <= kmax; ++k) {
          const double phase = 2.0 * pi * static_cast<double>(fourier_frequency(k)) * t;
          out[k - 1] = cdouble(std::cos(phase), std::sin(phase));
        }
      } else {
        throw ContractViolation("Fourier basis values are complex");
      }
      break;
    case BasisKind::legendre: {
      // (j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1}; eta_k = sqrt(2k-1) P_{k-1}.
      double p_prev = 1.0;
      double p_cur = t;
      for (std::uint32_t k = 1; k <= kmax; ++k) {
        const std::uint32_t deg = k - 1;
        double p_deg;
        if (deg == 0) {
          p_deg = 1.0;
        } else if (deg == 1) {
          p_deg = t;
        } else {
          const double j = static_cast<double>(deg - 1);
          const double next = ((2.0 * j + 1.0) * t * p_cur - j * p_prev) / (j + 1.0);
          p_prev = p_cur;
          p_cur = next;
          p_deg = next;
        }
        out[k - 1] = Scalar(std::sqrt(2.0 * deg + 1.0) * p_deg);
      }
      break;
    }
    case BasisKind::cosine:
      out[0] = Scalar(1.0);
      for (std::uint32_t k = 2; k <= kmax; ++k)
        out[k - 1] = Scalar(std::numbers::sqrt2 * std::cos(pi * static_cast<double>(k - 1) * t));
      break;
  }
}

template <class Scalar>
void eval_indices(const ProblemInstance& instance, std::span<const std::size_t> indices,
                  std::span<const double> x, std::span<Scalar> out) {
  const auto d = static_cast<std::size_t>(instance.dim());
  std::vector<std::uint32_t> kmax(d, 1U);
  for (std::size_t k : indices) {
    const MultiIndex& mi = instance.multi_index(k);
    for (std::size_t nu = 0; nu < d; ++nu) kmax[nu] = std::max(kmax[nu], mi[nu]);
  }
  std::vector<std::vector<Scalar>> tables(d);
  for (std::size_t nu = 0; nu < d; ++nu) {
    tables[nu].resize(kmax[nu]);
    univariate_values<Scalar>(instance.basis(), x[nu], kmax[nu], tables[nu].data());
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const MultiIndex& mi = instance.multi_index(indices[i]);
    Scalar v = tables[0][mi[0] - 1];
    for (std::size_t nu = 1; nu < d; ++nu) v *= tables[nu][mi[nu] - 1];
    out[i] = v;
  }
}

void check_indices(const ProblemInstance& instance, std::span<const std::size_t> indices) {
  for (std::size_t k : indices)
    if (k == 0 || k > instance.truncation())
      throw TruncationExceeded("basis index " + std::to_string(k) +
                               " outside the enumerated range 1.." +
                               std::to_string(instance.truncation()));
}

}  // namespace

std::vector<cdouble> eval_basis(const ProblemInstance& instance,
                                std::span<const std::size_t> indices,
                                std::span<const double> x) {
  instance.require_in_domain(x);
  check_indices(instance, indices);
  std::vector<cdouble> out(indices.size());
  if (is_real_basis(instance.basis())) {
    std::vector<double> real(indices.size());
    eval_indices<double>(instance, indices, x, real);
    std::copy(real.begin(), real.end(), out.begin());
  } else {
    eval_indices<cdouble>(instance, indices, x, out);
  }
  return out;
}

std::vector<double> eval_basis_real(const ProblemInstance& instance,
                                    std::span<const std::size_t> indices,
                                    std::span<const double> x) {
  if (!is_real_basis(instance.basis()))
    throw ParameterError("eval_basis_real called on a complex basis");
  instance.require_in_domain(x);
  check_indices(instance, indices);
  std::vector<double> out(indices.size());
  eval_indices<double>(instance, indices, x, out);
  return out;
}

template <class Scalar>
void eval_leading_basis(const ProblemInstance& instance, std::span<const double> x,
                        std::span<Scalar> out) {
  if (out.size() > instance.truncation())
    throw TruncationExceeded("requested more basis elements than enumerated");
  std::vector<std::size_t> idx(out.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k + 1;
  eval_indices<Scalar>(instance, idx, x, out);
}

template void eval_leading_basis<double>(const ProblemInstance&, std::span<const double>,
                                         std::span<double>);
template void eval_leading_basis<cdouble>(const ProblemInstance&, std::span<const double>,
                                          std::span<cdouble>);

double worst_case_error(const SpectralData& spectral, std::size_t n) {
  if (n + 1 > spectral.size())
    throw TruncationExceeded("worst-case error at n = " + std::to_string(n) +
                             " needs lambda_" + std::to_string(n + 1) + " but M = " +
                             std::to_string(spectral.size()));
  return std::sqrt(spectral.lambda(n + 1));
}

// ---------------------------------------------------------------------------
// coefficient functions

CoefficientFunction::CoefficientFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].index == 0) throw ParameterError("flat indices are one-based");
    if (i > 0 && terms_[i].index == terms_[i - 1].index)
      throw ParameterError("duplicate flat index " + std::to_string(terms_[i].index));
  }
}

CoefficientFunction CoefficientFunction::mode(std::size_t k, cdouble value) {
  return CoefficientFunction({{k, value}});
}

CoefficientFunction CoefficientFunction::unit_mode(const SpectralData& spectral, std::size_t k) {
  if (k == 0 || k > spectral.size())
    throw TruncationExceeded("mode index " + std::to_string(k) + " outside the spectrum");
  return mode(k, std::sqrt(spectral.lambda(k)));
}

cdouble CoefficientFunction::coeff(std::size_t k) const noexcept {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const Term& t, std::size_t key) { return t.index < key; });
  return (it != terms_.end() && it->index == k) ? it->coeff : cdouble{};
}

double CoefficientFunction::g_norm_sq() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coeff);
  return s;
}

double CoefficientFunction::f_norm_sq(const SpectralData& spectral) const {
  if (max_index() > spectral.size())
    throw TruncationExceeded("function support exceeds the enumerated spectrum");
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coeff) / spectral.lambda(t.index);
  return s;
}

cdouble CoefficientFunction::evaluate(const ProblemInstance& instance,
                                      std::span<const double> x) const {
  if (terms_.empty()) return {};
  std::vector<std::size_t> idx(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) idx[i] = terms_[i].index;
  const auto values = eval_basis(instance, idx, x);
  cdouble s{};
  for (std::size_t i = 0; i < terms_.size(); ++i) s += terms_[i].coeff * values[i];
  return s;
}

bool CoefficientFunction::operator==(const CoefficientFunction& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].index != other.terms_[i].index || terms_[i].coeff != other.terms_[i].coeff)
      return false;
  return true;
}

CoefficientFunction truncation_projection(const CoefficientFunction& f, std::size_t m) {
  std::vector<CoefficientFunction::Term> kept;
  for (const auto& t : f.terms())
    if (t.index <= m) kept.push_back(t);
  return CoefficientFunction(std::move(kept));
}

CoefficientFunction truncation_residual(const CoefficientFunction& f, std::size_t m) {
  std::vector<CoefficientFunction::Term> tail;
  for (const auto& t : f.terms())
    if (t.index > m) tail.push_back(t);
  return CoefficientFunction(std::move(tail));
}

}  // namespace wlsapprox
