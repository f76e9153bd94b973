#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "wlsapprox/complexity.hpp"
#include "wlsapprox/error_lab.hpp"
#include "wlsapprox/errors.hpp"
#include "wlsapprox/stats.hpp"

using namespace wlsapprox;

namespace {

ProblemInstance legendre2() {
  return ProblemInstance(BasisKind::legendre, WeightFamily::algebraic(1.0), 2, 200);
}

}  // namespace

TEST(ExpectedErrorBound, WorkedExample) {
  const auto s = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 1, 100);
  std::size_t n = 1;
  while (m_of_n(n, 0.5) < 9) ++n;
  ASSERT_EQ(m_of_n(n, 0.5), 9u);
  const double nd = static_cast<double>(n);
  EXPECT_NEAR(expected_error_bound(s, n, 0.5), std::sqrt(1.0 + 36.0 / nd) * std::sqrt(2.0) * 0.1, 1e-15);
  EXPECT_GT(expected_error_bound(s, n, 0.5), worst_case_error(s, 9));
  EXPECT_THROW(expected_error_bound(s, 96, 0.5), ParameterError);
}

TEST(ExpectedErrorBound, ApproachesWorstCaseErrorAsDeltaVanishes) {
  const auto s = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 1, 5000);
  const std::size_t n = 10'000'000;
  const std::size_t m = m_of_n(n, 1e-12);
  EXPECT_NEAR(expected_error_bound(s, n, 1e-12) / worst_case_error(s, m), 1.0, 1e-3);
}

TEST(TestBattery, ModesAndRandomFunction) {
  const auto inst = legendre2();
  RandomStream s(1);
  const auto battery = test_battery(inst, 3, s);
  std::vector<std::string> labels;
  for (const auto& lf : battery) labels.push_back(lf.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"mode_1", "mode_3", "mode_4", "mode_5", "mode_6",
                                              "mode_200", "random"}));
  for (const auto& lf : battery) EXPECT_NEAR(lf.f.f_norm_sq(inst.spectral()), 1.0, 1e-12);
  const auto small = test_battery(inst, 1, s, false);
  EXPECT_EQ(small.size(), 4u);  // 1, 2, 3, 200
}

TEST(RandomizedError, FunctionsInSpanAreExact) {
  const auto inst = legendre2();
  const std::size_t n = 2048;
  const std::size_t m = m_of_n(n, 0.5);
  RandomStream s(2);
  const auto f = random_unit_function(inst, m, s);
  const auto est = randomized_error_mc(inst, f, n, 0.5, 20, RandomStream(3));
  EXPECT_LE(est.mean_sq, 1e-18);
  EXPECT_EQ(est.m, m);
  EXPECT_EQ(est.R, 20u);
}

TEST(RandomizedError, WorstModeWithinBound) {
  const auto inst = legendre2();
  const std::size_t n = 512;
  const std::size_t m = m_of_n(n, 0.5);
  const auto f = CoefficientFunction::unit_mode(inst.spectral(), m + 1);
  const auto est = randomized_error_mc(inst, f, n, 0.5, 200, RandomStream(4));
  EXPECT_TRUE(est.within_bound()) << est.mean_sq << " vs " << est.bound_sq;
  const double lm1 = inst.spectral().lambda(m + 1);
  EXPECT_DOUBLE_EQ(est.bound_sq, (1.0 + 4.0 * static_cast<double>(m) / n) / 0.5 * lm1);
  EXPECT_GE(est.mean_sq, lm1);  // the tail alone contributes lambda_{m+1}
}

TEST(RandomizedError, Preconditions) {
  const auto inst = legendre2();
  const auto big = CoefficientFunction::mode(2, 10.0);
  EXPECT_THROW(randomized_error_mc(inst, big, 512, 0.5, 5, RandomStream(1)), ParameterError);
  const auto ok = CoefficientFunction::unit_mode(inst.spectral(), 2);
  EXPECT_THROW(randomized_error_mc(inst, ok, 96, 0.5, 5, RandomStream(1)), ParameterError);
  EXPECT_THROW(randomized_error_mc(inst, ok, 512, 0.5, 0, RandomStream(1)), ParameterError);
}

TEST(RandomizedError, IndependentOfThreadCount) {
  const auto inst = legendre2();
  RandomStream s(5);
  const auto battery = test_battery(inst, m_of_n(1024, 0.5), s);
  const auto a = randomized_error_battery(inst, battery, 1024, 0.5, 40, RandomStream(6), {1});
  const auto b = randomized_error_battery(inst, battery, 1024, 0.5, 40, RandomStream(6), {3});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean_sq, b[i].mean_sq);
    EXPECT_EQ(a[i].std_err, b[i].std_err);
  }
}

// Fourier: f = sqrt(lambda_M) eta_M with M > m. The squared error is
// lambda_M (1 + ||c||^2), with c the fit of eta_M; simulated here with a
// hand-written accept loop and normal-equation solve on uniform nodes.
TEST(RandomizedError, FourierTailDecompositionMatchesDirectSimulation) {
  ProblemInstance inst(BasisKind::fourier, WeightFamily::algebraic(1.0), 1, 40);
  const std::size_t n = 2048, M = 40, R = 300;
  const std::size_t m = m_of_n(n, 0.5);
  ASSERT_GE(m, 2u);
  const auto f = CoefficientFunction::unit_mode(inst.spectral(), M);
  const auto est = randomized_error_mc(inst, f, n, 0.5, R, RandomStream(7));

  const double lM = inst.spectral().lambda(M);
  const auto freq = [](std::size_t k) { return static_cast<double>(fourier_frequency(static_cast<std::uint32_t>(k))); };
  RandomStream rng(8);
  std::vector<double> sims(R);
  for (std::size_t r = 0; r < R; ++r) {
    for (;;) {
      Eigen::MatrixXcd L(n, m);
      Eigen::VectorXcd y(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform();
        for (std::size_t j = 0; j < m; ++j)
          L(i, j) = std::polar(1.0, 2.0 * std::numbers::pi * freq(j + 1) * x);
        y(i) = std::polar(1.0, 2.0 * std::numbers::pi * freq(M) * x);
      }
      const Eigen::MatrixXcd G = L.adjoint() * L / static_cast<double>(n);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
      if ((es.eigenvalues().array() - 1.0).abs().maxCoeff() > 0.5) continue;
      const Eigen::VectorXcd c = (L.adjoint() * L).ldlt().solve(L.adjoint() * y);
      sims[r] = lM * (1.0 + c.squaredNorm());
      break;
    }
  }
  const auto direct = moments(sims);
  EXPECT_NEAR(est.mean_sq, direct.mean, 3.0 * std::hypot(est.std_err, direct.std_err));
}

TEST(Concentration, FourierSingleModeNeverExceeds) {
  ProblemInstance inst(BasisKind::fourier, WeightFamily::algebraic(1.0), 2, 10);
  for (double t : {0.01, 0.5, 0.99}) {
    const auto rep = concentration_experiment(inst, 1, 20, t, 100, RandomStream(9));
    EXPECT_EQ(rep.empirical_prob, 0.0);
    EXPECT_EQ(rep.exceed_count, 0u);
  }
}

TEST(Concentration, BoundFormula) {
  const double raw = concentration_bound(4, 2048, 0.5);
  EXPECT_NEAR(raw, std::pow(4096.0, std::numbers::sqrt2) * std::exp(-2048.0 * 0.25 / 48.0),
              1e-12 * raw);
  EXPECT_LT(concentration_bound(2, 100000, 0.5), 1e-50);
}

TEST(Concentration, LegendreWithinBound) {
  ProblemInstance inst(BasisKind::legendre, WeightFamily::algebraic(1.0), 1, 20);
  const double ts[2] = {0.3, 0.5};
  const auto reps = concentration_experiment(inst, 4, 2048, ts, 2000, RandomStream(10));
  for (const auto& r : reps) {
    EXPECT_TRUE(r.holds()) << r.t;
    EXPECT_GE(r.empirical_prob, 0.0);
    EXPECT_LE(r.empirical_prob, 1.0);
    EXPECT_EQ(r.bound, std::min(1.0, r.raw_bound));
  }
  EXPECT_THROW(concentration_experiment(inst, 4, 64, 1.0, 10, RandomStream(1)), ParameterError);
  EXPECT_THROW(concentration_experiment(inst, 4, 64, 0.0, 10, RandomStream(1)), ParameterError);
}

TEST(ExpDecay, ConstantsAndCurves) {
  ProblemInstance inst(BasisKind::legendre, WeightFamily::exponential(0.5), 1, 200);
  const std::size_t grid[] = {200, 400, 800, 1600, 3200};
  const auto rep = exp_decay_check(inst, grid, 30, RandomStream(11));
  EXPECT_GT(rep.q2, rep.q);
  EXPECT_LT(rep.q2, 1.0);
  EXPECT_NEAR(rep.q_error, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(rep.A_error, 1.0 / std::sqrt(0.5), 1e-12);
  EXPECT_TRUE(rep.curves_ordered());
  EXPECT_TRUE(rep.all_hold());
  const double delta = decay_delta();
  for (const auto& row : rep.rows) {
    const double nd = static_cast<double>(row.n);
    EXPECT_EQ(row.m, static_cast<std::size_t>(std::floor(nd / (48.0 * std::numbers::sqrt2 * std::log(4.0 * nd)))));
    EXPECT_EQ(row.m, m_of_n(row.n, delta));
    EXPECT_DOUBLE_EQ(row.bound_wor, 4.0 * worst_case_error(inst.spectral(), row.m));
    if (row.m == 0) {
      EXPECT_EQ(row.mean_sq, 1.0);
      EXPECT_EQ(row.std_err, 0.0);
    }
  }
}

TEST(ExpDecay, RejectsAlgebraicWeights) {
  const auto inst = legendre2();
  const std::size_t grid[] = {800};
  EXPECT_THROW(exp_decay_check(inst, grid, 5, RandomStream(1)), ParameterError);
}
