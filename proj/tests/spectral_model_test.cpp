#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "wlsapprox/errors.hpp"
#include "wlsapprox/quadrature.hpp"
#include "wlsapprox/random.hpp"
#include "wlsapprox/spectral_model.hpp"

using namespace wlsapprox;

namespace {

std::size_t flat_index_of(const ProblemInstance& inst, const MultiIndex& idx) {
  for (std::size_t k = 1; k <= inst.truncation(); ++k)
    if (inst.multi_index(k) == idx) return k;
  return 0;
}

// All multi-indices in {1..K}^d, ranked by (eigenvalue desc, lexicographic asc).
std::vector<std::pair<double, MultiIndex>> brute_force(const WeightFamily& w, int d,
                                                      std::uint32_t K) {
  std::vector<std::pair<double, MultiIndex>> all;
  MultiIndex idx(static_cast<std::size_t>(d), 1U);
  while (true) {
    all.emplace_back(w.eigenvalue(idx), idx);
    int nu = d - 1;
    while (nu >= 0 && idx[static_cast<std::size_t>(nu)] == K) idx[static_cast<std::size_t>(nu--)] = 1;
    if (nu < 0) break;
    ++idx[static_cast<std::size_t>(nu)];
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  return all;
}

}  // namespace

TEST(Basis, FourierHasUnitModulus) {
  ProblemInstance inst(BasisKind::fourier, WeightFamily::algebraic(1.0), 2, 50);
  RandomStream s(5);
  std::vector<std::size_t> idx(50);
  for (std::size_t k = 0; k < 50; ++k) idx[k] = k + 1;
  for (int trial = 0; trial < 20; ++trial) {
    const double x[2] = {s.uniform(), s.uniform()};
    for (const cdouble v : eval_basis(inst, idx, x)) EXPECT_NEAR(std::abs(v), 1.0, 1e-14);
  }
}

TEST(Basis, FourierFrequencyOrder) {
  const std::int64_t expected[] = {0, 1, -1, 2, -2, 3, -3};
  for (std::uint32_t k = 1; k <= 7; ++k) EXPECT_EQ(fourier_frequency(k), expected[k - 1]);
}

TEST(Basis, LegendreDegreeOneInOneDimension) {
  ProblemInstance inst(BasisKind::legendre, WeightFamily::algebraic(1.0), 1, 10);
  const std::size_t k = flat_index_of(inst, {2});
  ASSERT_EQ(k, 2u);
  const double x[1] = {0.5};
  const std::size_t idx[1] = {k};
  EXPECT_NEAR(eval_basis_real(inst, idx, x)[0], std::sqrt(3.0) * 0.5, 1e-15);
}

TEST(Basis, LegendreTensorProduct) {
  ProblemInstance inst(BasisKind::legendre, WeightFamily::algebraic(1.0), 2, 10);
  const std::size_t k = flat_index_of(inst, {2, 2});
  ASSERT_NE(k, 0u);
  const double x[2] = {0.5, -0.5};
  const std::size_t idx[1] = {k};
  EXPECT_NEAR(eval_basis_real(inst, idx, x)[0], -0.75, 1e-15);
}

TEST(Basis, CosineValues) {
  ProblemInstance inst(BasisKind::cosine, WeightFamily::algebraic(1.0), 1, 5);
  const double x[1] = {0.3};
  const std::size_t idx[3] = {1, 2, 3};
  const auto v = eval_basis_real(inst, idx, x);
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_NEAR(v[1], std::sqrt(2.0) * std::cos(std::numbers::pi * 0.3), 1e-15);
  EXPECT_NEAR(v[2], std::sqrt(2.0) * std::cos(2 * std::numbers::pi * 0.3), 1e-15);
}

TEST(Basis, FirstElementIsConstant) {
  for (BasisKind kind : {BasisKind::fourier, BasisKind::legendre, BasisKind::cosine}) {
    ProblemInstance inst(kind, WeightFamily::exponential(0.3, 2.0), 3, 20);
    EXPECT_EQ(inst.multi_index(1), (MultiIndex{1, 1, 1}));
    const Interval box = coordinate_interval(kind);
    const double x[3] = {box.lo, 0.5 * (box.lo + box.hi), box.hi};
    const std::size_t idx[1] = {1};
    EXPECT_NEAR(std::abs(eval_basis(inst, idx, x)[0] - cdouble(1.0)), 0.0, 1e-15);
  }
}

class Orthonormality : public ::testing::TestWithParam<std::tuple<BasisKind, int>> {};

TEST_P(Orthonormality, GramIsIdentityUnderReferenceDensity) {
  const auto [kind, d] = GetParam();
  ProblemInstance inst(kind, WeightFamily::algebraic(1.0), d, 10);
  const Interval box = coordinate_interval(kind);
  const auto rule = gauss_legendre(64, box.lo, box.hi);
  const double rho = inst.reference_density();
  std::vector<std::size_t> idx(10);
  for (std::size_t k = 0; k < 10; ++k) idx[k] = k + 1;

  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i; j < 10; ++j) {
      auto part = [&](bool imag) {
        return tensor_integrate(rule, d, [&](std::span<const double> x) {
          const auto v = eval_basis(inst, idx, x);
          const cdouble p = v[i] * std::conj(v[j]) * rho;
          return imag ? p.imag() : p.real();
        });
      };
      EXPECT_NEAR(part(false), i == j ? 1.0 : 0.0, 1e-8) << i << "," << j;
      EXPECT_NEAR(part(true), 0.0, 1e-8) << i << "," << j;
    }
}

INSTANTIATE_TEST_SUITE_P(AllBases, Orthonormality,
                         ::testing::Combine(::testing::Values(BasisKind::fourier,
                                                              BasisKind::legendre,
                                                              BasisKind::cosine),
                                            ::testing::Values(1, 2)));

TEST(Basis, RealAndComplexEvaluationAgree) {
  ProblemInstance inst(BasisKind::legendre, WeightFamily::algebraic(0.8), 3, 40);
  std::vector<std::size_t> idx(40);
  for (std::size_t k = 0; k < 40; ++k) idx[k] = k + 1;
  const double x[3] = {0.1, -0.7, 0.9};
  const auto c = eval_basis(inst, idx, x);
  const auto r = eval_basis_real(inst, idx, x);
  std::vector<double> lead(40);
  eval_leading_basis<double>(inst, x, lead);
  for (std::size_t k = 0; k < 40; ++k) {
    EXPECT_DOUBLE_EQ(c[k].real(), r[k]);
    EXPECT_EQ(c[k].imag(), 0.0);
    EXPECT_DOUBLE_EQ(lead[k], r[k]);
  }
}

TEST(Basis, Errors) {
  ProblemInstance leg(BasisKind::legendre, WeightFamily::algebraic(1.0), 1, 5);
  const std::size_t one[1] = {1};
  const std::size_t six[1] = {6};
  const std::size_t zero[1] = {0};
  const double out[1] = {1.5};
  const double in[1] = {0.0};
  EXPECT_THROW(eval_basis(leg, one, out), DomainError);
  EXPECT_THROW(eval_basis(leg, six, in), TruncationExceeded);
  EXPECT_THROW(eval_basis(leg, zero, in), Error);
  ProblemInstance fou(BasisKind::fourier, WeightFamily::algebraic(1.0), 1, 5);
  const double half[1] = {0.5};
  EXPECT_THROW(eval_basis_real(fou, one, half), ParameterError);
  const double two[2] = {0.5, 0.5};
  EXPECT_THROW(fou.require_in_domain(two), DomainError);
  EXPECT_THROW(basis_kind_from_string("hermite"), ConfigError);
  EXPECT_EQ(basis_kind_from_string("cosine"), BasisKind::cosine);
}

TEST(Weights, Validation) {
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::algebraic(0.5), 1, 5), ParameterError);
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::algebraic(1.0, {0.5}), 2, 5), ParameterError);
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::algebraic(1.0, {1.5, 1.0}), 2, 5),
               ParameterError);
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::exponential(1.0), 1, 5), ParameterError);
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::exponential(0.5, 0.5), 1, 5), ParameterError);
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::algebraic(1.0), 1, 0), ParameterError);
  EXPECT_THROW(enumerate_eigenvalues(WeightFamily::algebraic(1.0), 0, 3), ParameterError);
}

TEST(Weights, ProductFormula) {
  const WeightFamily w = WeightFamily::algebraic(1.0, {1.0, 0.5});
  const std::uint32_t idx[2] = {3, 2};
  EXPECT_DOUBLE_EQ(w.eigenvalue(idx), 0.5 / 36.0);
  const WeightFamily e = WeightFamily::exponential(0.5, 3.0);
  EXPECT_DOUBLE_EQ(e.eigenvalue(idx), 3.0 / 8.0);
}

class Enumeration
    : public ::testing::TestWithParam<std::tuple<int, std::size_t, WeightFamily>> {};

TEST_P(Enumeration, MatchesBruteForce) {
  const auto& [d, M, w] = GetParam();
  const auto data = enumerate_eigenvalues(w, d, M);
  const auto oracle = brute_force(w, d, static_cast<std::uint32_t>(M + 1));
  ASSERT_EQ(data.size(), M);
  for (std::size_t k = 0; k < M; ++k) {
    EXPECT_EQ(data.lambdas[k], oracle[k].first) << k;
    EXPECT_EQ(data.order[k], oracle[k].second) << k;
  }
}

INSTANTIATE_TEST_SUITE_P(
    SmallDims, Enumeration,
    ::testing::Values(std::make_tuple(1, 100, WeightFamily::algebraic(1.0)),
                      std::make_tuple(2, 100, WeightFamily::algebraic(1.0)),
                      std::make_tuple(2, 77, WeightFamily::algebraic(0.75, {1.0, 0.3})),
                      std::make_tuple(3, 100, WeightFamily::algebraic(1.0)),
                      std::make_tuple(3, 60, WeightFamily::algebraic(2.0, {0.9, 0.5, 0.25})),
                      std::make_tuple(2, 100, WeightFamily::exponential(0.5)),
                      std::make_tuple(3, 100, WeightFamily::exponential(0.7, 2.0))));

TEST(Enumeration, NonincreasingWithLexicographicTies) {
  const auto data = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 3, 500);
  for (std::size_t k = 1; k < data.size(); ++k) {
    ASSERT_GE(data.lambdas[k - 1], data.lambdas[k]);
    if (data.lambdas[k - 1] == data.lambdas[k]) ASSERT_LT(data.order[k - 1], data.order[k]);
  }
  // (1,2) and (2,1) tie at 1/4; the lexicographically smaller comes first.
  const auto two = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 2, 3);
  EXPECT_EQ(two.order[1], (MultiIndex{1, 2}));
  EXPECT_EQ(two.order[2], (MultiIndex{2, 1}));
}

TEST(WorstCaseError, Examples) {
  const auto alg = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 1, 10);
  EXPECT_DOUBLE_EQ(worst_case_error(alg, 0), 1.0);
  EXPECT_DOUBLE_EQ(worst_case_error(alg, 3), 0.25);
  const auto ex = enumerate_eigenvalues(WeightFamily::exponential(0.5), 1, 10);
  EXPECT_DOUBLE_EQ(worst_case_error(ex, 4), 0.25);
  EXPECT_THROW(worst_case_error(alg, 10), TruncationExceeded);
  for (std::size_t n = 1; n < 10; ++n) EXPECT_LE(worst_case_error(alg, n), worst_case_error(alg, n - 1));
}

TEST(CoefficientFunction, TruncationProjectionExamples) {
  const CoefficientFunction f({{1, 0.3}, {5, 0.4}});
  EXPECT_EQ(truncation_projection(f, 4), CoefficientFunction({{1, 0.3}}));
  EXPECT_TRUE(truncation_projection(f, 0).empty());
  const CoefficientFunction tail = CoefficientFunction::mode(9, cdouble(0.0, -0.7));
  EXPECT_NEAR(std::sqrt(truncation_residual(tail, 4).g_norm_sq()), 0.7, 1e-15);
  const auto r = truncation_residual(f, 4);
  EXPECT_NEAR(r.g_norm_sq(), 0.16, 1e-16);
}

TEST(CoefficientFunction, RejectsBadTerms) {
  EXPECT_THROW(CoefficientFunction({{0, 1.0}}), ParameterError);
  EXPECT_THROW(CoefficientFunction({{3, 1.0}, {3, 2.0}}), ParameterError);
  const CoefficientFunction sorted({{7, 1.0}, {2, 2.0}});
  EXPECT_EQ(sorted.terms().front().index, 2u);
  EXPECT_EQ(sorted.max_index(), 7u);
}

TEST(CoefficientFunction, NormsAndUnitModes) {
  const auto data = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 2, 30);
  for (std::size_t k : {1u, 7u, 30u})
    EXPECT_NEAR(CoefficientFunction::unit_mode(data, k).f_norm_sq(data), 1.0, 1e-14);
  EXPECT_THROW(CoefficientFunction::unit_mode(data, 31), TruncationExceeded);
  EXPECT_THROW(CoefficientFunction::mode(31, 1.0).f_norm_sq(data), TruncationExceeded);
}

TEST(CoefficientFunction, ParsevalAgainstQuadrature) {
  for (BasisKind kind : {BasisKind::fourier, BasisKind::legendre, BasisKind::cosine}) {
    ProblemInstance inst(kind, WeightFamily::algebraic(1.0), 1, 12);
    RandomStream s(11);
    std::vector<CoefficientFunction::Term> terms;
    for (std::size_t k = 1; k <= 12; ++k)
      terms.push_back({k, cdouble(s.normal(), kind == BasisKind::fourier ? s.normal() : 0.0)});
    const CoefficientFunction f(terms);
    double exact = 0.0;
    for (const auto& t : terms) exact += std::norm(t.coeff);
    EXPECT_NEAR(f.g_norm_sq(), exact, 1e-14 * exact);

    const Interval box = coordinate_interval(kind);
    const auto rule = gauss_legendre(64, box.lo, box.hi);
    const double quad = tensor_integrate(rule, 1, [&](std::span<const double> x) {
      return std::norm(f.evaluate(inst, x)) * inst.reference_density();
    });
    EXPECT_NEAR(quad, exact, 1e-10 * exact) << to_string(kind);
  }
}
