#include "wlsapprox/error_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "wlsapprox/complexity.hpp"
#include "wlsapprox/errors.hpp"
#include "wlsapprox/parallel.hpp"
#include "wlsapprox/stats.hpp"

namespace wlsapprox {

CoefficientFunction random_unit_function(const ProblemInstance& instance, std::size_t support,
                                         RandomStream& stream) {
  support = std::min(support, instance.truncation());
  if (support == 0) throw ParameterError("random function needs a nonempty support");
  const bool complex_coeffs = !is_real_basis(instance.basis());
  std::vector<std::complex<double>> z(support);
  double norm_sq = 0.0;
  for (auto& v : z) {
    v = complex_coeffs ? std::complex<double>(stream.normal(), stream.normal())
                       : std::complex<double>(stream.normal(), 0.0);
    norm_sq += std::norm(v);
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  std::vector<CoefficientFunction::Term> terms;
  terms.reserve(support);
  for (std::size_t k = 1; k <= support; ++k)
    terms.push_back({k, std::sqrt(instance.spectral().lambda(k)) * z[k - 1] * scale});
  return CoefficientFunction(std::move(terms));
}

std::vector<LabeledFunction> test_battery(const ProblemInstance& instance, std::size_t m,
                                          RandomStream& stream, bool with_random) {
  const std::size_t M = instance.truncation();
  std::vector<LabeledFunction> out;
  std::set<std::size_t> seen;
  for (std::size_t k : {std::size_t{1}, m, m + 1, m + 2, 2 * m, M}) {
    if (k == 0 || k > M || !seen.insert(k).second) continue;
    out.push_back({"mode_" + std::to_string(k), CoefficientFunction::unit_mode(instance.spectral(), k)});
  }
  if (with_random) out.push_back({"random", random_unit_function(instance, M, stream)});
  return out;
}

double expected_error_bound(const SpectralData& spectral, std::size_t n, double delta) {
  const std::size_t m = m_of_n(n, delta);
  if (m == 0)
    throw ParameterError("m_of_n(" + std::to_string(n) + ", delta) = 0; increase n or delta");
  const double prefactor = std::sqrt(1.0 + 4.0 * static_cast<double>(m) / static_cast<double>(n)) /
                           std::sqrt(1.0 - delta);
  return prefactor * worst_case_error(spectral, m);
}

std::vector<ErrorEstimate> randomized_error_battery(const ProblemInstance& instance,
                                                    std::span<const LabeledFunction> functions,
                                                    std::size_t n, double delta, std::size_t R,
                                                    const RandomStream& stream,
                                                    const ExperimentOptions& options) {
  if (R == 0) throw ParameterError("replication count must be positive");
  const std::size_t m = m_of_n(n, delta);
  if (m == 0)
    throw ParameterError("m_of_n(" + std::to_string(n) + ", delta) = 0; increase n or delta");
  const double bound = expected_error_bound(instance.spectral(), n, delta);
  for (const auto& lf : functions) {
    if (lf.f.f_norm_sq(instance.spectral()) > 1.0 + 1e-12)
      throw ParameterError("test function '" + lf.label + "' has F-norm above 1");
  }

  const std::size_t nf = functions.size();
  std::vector<double> sq(nf * R);
  std::vector<double> retries(R);
  parallel_for(R, options.threads, [&](std::size_t r) {
    RandomStream sub = stream.substream(r);
    AcceptedSample accepted = draw_accepted(instance, m, n, sub, options.max_retries);
    retries[r] = static_cast<double>(accepted.retries);
    for (std::size_t i = 0; i < nf; ++i) {
      const auto values = sample_values(instance, functions[i].f, accepted.sample);
      const WlsModel model = solve(instance, m, accepted.sample, values, accepted.retries);
      const double e = g_error(instance, model, functions[i].f);
      sq[i * R + r] = e * e;
    }
  });

  const double retries_mean = moments(retries).mean;
  std::vector<ErrorEstimate> out;
  out.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const SampleMoments mom = moments(std::span<const double>(sq.data() + i * R, R));
    ErrorEstimate est;
    est.label = functions[i].label;
    est.n = n;
    est.m = m;
    est.delta = delta;
    est.R = R;
    est.mean_sq = mom.mean;
    est.std_err = mom.std_err;
    est.bound_sq = bound * bound;
    est.retries_mean = retries_mean;
    out.push_back(std::move(est));
  }
  return out;
}

ErrorEstimate randomized_error_mc(const ProblemInstance& instance, const CoefficientFunction& f,
                                  std::size_t n, double delta, std::size_t R,
                                  const RandomStream& stream, const ExperimentOptions& options) {
  const LabeledFunction lf{"f", f};
  return randomized_error_battery(instance, std::span(&lf, 1), n, delta, R, stream, options)
      .front();
}

double concentration_bound(std::size_t m, std::size_t n, double t) {
  const auto nd = static_cast<double>(n);
  return std::pow(2.0 * nd, std::numbers::sqrt2) *
         std::exp(-nd * t * t / (12.0 * static_cast<double>(m)));
}

std::vector<ConcentrationReport> concentration_experiment(const ProblemInstance& instance,
                                                          std::size_t m, std::size_t n,
                                                          std::span<const double> thresholds,
                                                          std::size_t R,
                                                          const RandomStream& stream,
                                                          unsigned threads) {
  for (double t : thresholds)
    if (!(t > 0.0 && t < 1.0)) throw ParameterError("threshold t must lie in (0, 1)");
  if (R == 0) throw ParameterError("replication count must be positive");
  const SamplingDensity density(instance, m);
  std::vector<double> deviation(R);
  parallel_for(R, threads, [&](std::size_t r) {
    RandomStream sub = stream.substream(r);
    const SampleSet X = draw_nodes(density, n, sub);
    deviation[r] = spectral_deviation(instance, m, X);
  });

  std::vector<ConcentrationReport> out;
  for (double t : thresholds) {
    ConcentrationReport rep;
    rep.m = m;
    rep.n = n;
    rep.t = t;
    rep.R = R;
    rep.exceed_count = static_cast<std::size_t>(
        std::count_if(deviation.begin(), deviation.end(), [t](double v) { return v > t; }));
    rep.empirical_prob = static_cast<double>(rep.exceed_count) / static_cast<double>(R);
    rep.raw_bound = concentration_bound(m, n, t);
    rep.bound = std::min(1.0, rep.raw_bound);
    out.push_back(rep);
  }
  return out;
}

ConcentrationReport concentration_experiment(const ProblemInstance& instance, std::size_t m,
                                             std::size_t n, double t, std::size_t R,
                                             const RandomStream& stream, unsigned threads) {
  return concentration_experiment(instance, m, n, std::span(&t, 1), R, stream, threads).front();
}

double GramMeanReport::worst_excess(double sigmas) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < mean.rows(); ++i)
    for (Eigen::Index j = 0; j < mean.cols(); ++j) {
      const std::complex<double> target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(mean(i, j) - target) - sigmas * std_err(i, j));
    }
  return worst;
}

GramMeanReport gram_mean_experiment(const ProblemInstance& instance, std::size_t m,
                                    std::size_t n, std::size_t R, const RandomStream& stream,
                                    unsigned threads) {
  if (R < 2) throw ParameterError("need at least two replications for a standard error");
  const SamplingDensity density(instance, m);
  std::vector<Eigen::MatrixXcd> grams(R);
  parallel_for(R, threads, [&](std::size_t r) {
    RandomStream sub = stream.substream(r);
    const SampleSet X = draw_nodes(density, n, sub);
    if (is_real_basis(instance.basis()))
      grams[r] = assemble<double>(instance, m, X).H.cast<std::complex<double>>();
    else
      grams[r] = assemble<std::complex<double>>(instance, m, X).H;
  });

  const auto mm = static_cast<Eigen::Index>(m);
  GramMeanReport out;
  out.mean.resize(mm, mm);
  out.std_err.resize(mm, mm);
  std::vector<double> re(R);
  std::vector<double> im(R);
  for (Eigen::Index i = 0; i < mm; ++i)
    for (Eigen::Index j = 0; j < mm; ++j) {
      for (std::size_t r = 0; r < R; ++r) {
        re[r] = grams[r](i, j).real();
        im[r] = grams[r](i, j).imag();
      }
      const SampleMoments mr = moments(re);
      const SampleMoments mi = moments(im);
      out.mean(i, j) = {mr.mean, mi.mean};
      out.std_err(i, j) = std::hypot(mr.std_err, mi.std_err);
    }
  return out;
}

double decay_delta() { return std::pow(2.0, -std::numbers::sqrt2); }

bool DecayReport::curves_ordered() const {
  return std::all_of(rows.begin(), rows.end(), [](const DecayRow& r) {
    return r.bound_geometric >= r.bound_wor * (1.0 - 1e-12);
  });
}

bool DecayReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const DecayRow& r) { return r.holds(); });
}

DecayReport exp_decay_check(const ProblemInstance& instance, std::span<const std::size_t> n_grid,
                            std::size_t R, const RandomStream& stream,
                            const ExperimentOptions& options) {
  const WeightFamily& w = instance.weights();
  if (w.kind != WeightFamily::Kind::exponential)
    throw ParameterError("exp-decay check requires exponential weights");
  const SpectralData& spectral = instance.spectral();

  DecayReport report;
  report.q = w.q;
  report.A = w.A;
  report.R = R;
  // sqrt(lambda_{n+1} / lambda_1) decays like q^(n/2) along each axis.
  report.q_error = std::sqrt(w.q);
  double a_error = 1.0;
  for (std::size_t j = 0; j < spectral.size(); ++j) {
    const double ratio = std::sqrt(spectral.lambdas[j] / spectral.lambdas[0]) /
                         std::pow(report.q_error, static_cast<double>(j + 1));
    a_error = std::max(a_error, ratio);
  }
  report.A_error = a_error;
  report.q2 = std::pow(report.q_error, 1.0 / (48.0 * std::numbers::sqrt2));

  const double delta = decay_delta();
  const double sqrt_l1 = std::sqrt(spectral.lambda(1));
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::size_t n = n_grid[g];
    DecayRow row;
    row.n = n;
    row.m = m_of_n(n, delta);
    row.bound_wor = 4.0 * worst_case_error(spectral, row.m);
    const auto nd = static_cast<double>(n);
    row.bound_geometric = 4.0 * report.A_error * std::pow(report.q2, nd / std::log(4.0 * nd)) * sqrt_l1;

    RandomStream battery_stream = stream.substream(g);
    const auto battery = test_battery(instance, row.m, battery_stream, /*with_random=*/false);
    if (row.m == 0) {
      // Zero approximant: the squared error is the G-norm squared, exactly.
      for (const auto& lf : battery) {
        const double e = lf.f.g_norm_sq();
        if (row.worst_label.empty() || e > row.mean_sq) {
          row.mean_sq = e;
          row.worst_label = lf.label;
        }
      }
    } else {
      const auto estimates = randomized_error_battery(instance, battery, n, delta, R,
                                                      stream.substream(g).substream(1), options);
      const auto worst = std::max_element(
          estimates.begin(), estimates.end(),
          [](const ErrorEstimate& a, const ErrorEstimate& b) { return a.mean_sq < b.mean_sq; });
      row.mean_sq = worst->mean_sq;
      row.std_err = worst->std_err;
      row.worst_label = worst->label;
      row.retries_mean = worst->retries_mean;
    }
    row.error_estimate = std::sqrt(row.mean_sq);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace wlsapprox
