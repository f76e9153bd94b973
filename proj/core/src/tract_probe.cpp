#include "wlsapprox/tract_probe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "wlsapprox/errors.hpp"

namespace wlsapprox {

// ---------------------------------------------------------------------------
// families

const char* to_string(SpectrumFamily::Kind kind) noexcept {
  switch (kind) {
    case SpectrumFamily::Kind::tensor: return "tensor";
    case SpectrumFamily::Kind::d_independent: return "d_independent";
    case SpectrumFamily::Kind::flat: return "flat";
  }
  return "unknown";
}

SpectrumFamily::Kind family_kind_from_string(const std::string& name) {
  if (name == "tensor") return SpectrumFamily::Kind::tensor;
  if (name == "d_independent") return SpectrumFamily::Kind::d_independent;
  if (name == "flat") return SpectrumFamily::Kind::flat;
  throw ConfigError("unknown spectrum family '" + name + "'");
}

SpectralData SpectrumFamily::spectrum(int d, std::size_t M) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("family scale must be positive");
  if (d < 1) throw ParameterError("dimension must be positive");
  SpectralData out;
  switch (kind) {
    case Kind::tensor:
      out = enumerate_eigenvalues(weights, d, M);
      break;
    case Kind::d_independent:
      out = enumerate_eigenvalues(weights, 1, M);
      out.d = d;
      break;
    case Kind::flat: {
      if (M == 0) throw ParameterError("truncation length M must be at least 1");
      out.d = d;
      out.lambdas.resize(M);
      out.order.resize(M);
      const double plateau = std::ldexp(1.0, d);
      for (std::size_t k = 1; k <= M; ++k) {
        const double r = plateau / static_cast<double>(k);
        out.lambdas[k - 1] = std::min(1.0, r * r);
        out.order[k - 1] = MultiIndex{static_cast<std::uint32_t>(k)};
      }
      break;
    }
  }
  if (scale != 1.0)
    for (double& l : out.lambdas) l *= scale;
  return out;
}

ComplexityTable probe_grid(const SpectrumFamily& family, std::span<const int> d_grid,
                           std::span<const double> eps_grid, Criterion criterion, double delta,
                           double omega, std::size_t max_truncation) {
  if (d_grid.empty() || eps_grid.empty()) throw ParameterError("probe grids must be nonempty");
  ComplexityTable table = complexity_table(SpectralData{}, {}, criterion, delta, omega);
  const double eps_min = *std::min_element(eps_grid.begin(), eps_grid.end());
  const double target = eps_min / std::max(4.0, a_delta(delta));

  for (int d : d_grid) {
    std::size_t M = std::min<std::size_t>(256, max_truncation);
    SpectralData spectral = family.spectrum(d, M);
    while (M < max_truncation &&
           std::sqrt(spectral.lambdas.back()) > target * criterion_value(spectral, criterion)) {
      M = std::min(2 * M, max_truncation);
      spectral = family.spectrum(d, M);
    }
    append_rows(table, spectral, eps_grid);
  }
  return table;
}

// ---------------------------------------------------------------------------
// notions

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string Notion::name() const {
  std::string prefix = growth == Growth::algebraic ? "ALG-" : "EXP-";
  switch (type) {
    case NotionType::spt: return prefix + "SPT";
    case NotionType::pt: return prefix + "PT";
    case NotionType::qpt: return prefix + "QPT";
    case NotionType::uwt: return prefix + "UWT";
    case NotionType::wt: return prefix + "WT";
    case NotionType::st_wt: {
      std::ostringstream os;
      os << prefix << "(" << s << "," << t << ")-WT";
      return os.str();
    }
  }
  return prefix + "?";
}

std::vector<Notion> Notion::all(double s, double t) {
  std::vector<Notion> out;
  for (Growth g : {Growth::algebraic, Growth::exponential})
    for (NotionType type : {NotionType::spt, NotionType::pt, NotionType::qpt, NotionType::uwt,
                            NotionType::wt, NotionType::st_wt})
      out.push_back({g, type, s, t});
  return out;
}

namespace {

struct Cell {
  double eps;
  int d;
  double log_n;  // ln max(n, 1)
  bool inner;
};

// 1/eps for algebraic notions, 1 + ln(1/eps) for exponential ones.
double eps_scale(Growth g, double eps) {
  return g == Growth::algebraic ? 1.0 / eps : 1.0 + std::log(1.0 / eps);
}

struct Fit {
  bool ok = false;
  double intercept = 0.0;
  std::vector<double> coef;
  std::vector<double> residuals;
  double rms = 0.0;
};

// Least squares with intercept and nonnegative slopes (active-set elimination).
Fit nonnegative_fit(const std::vector<std::vector<double>>& regressors,
                    const std::vector<double>& y) {
  const std::size_t rows = y.size();
  const std::size_t p = regressors.empty() ? 0 : regressors.front().size();
  std::vector<bool> active(p, true);
  Fit fit;
  for (std::size_t round = 0; round <= p; ++round) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < p; ++j)
      if (active[j]) cols.push_back(j);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size() + 1));
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      A(ii, 0) = 1.0;
      for (std::size_t c = 0; c < cols.size(); ++c)
        A(ii, static_cast<Eigen::Index>(c + 1)) = regressors[i][cols[c]];
      b(ii) = y[i];
    }
    const auto qr = A.colPivHouseholderQr();
    if (qr.rank() < A.cols()) return fit;
    const Eigen::VectorXd sol = qr.solve(b);

    bool negative = false;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (sol(static_cast<Eigen::Index>(c + 1)) < 0.0) {
        active[cols[c]] = false;
        negative = true;
      }
    if (negative) continue;

    fit.ok = true;
    fit.intercept = sol(0);
    fit.coef.assign(p, 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c)
      fit.coef[cols[c]] = sol(static_cast<Eigen::Index>(c + 1));
    const Eigen::VectorXd r = b - A * sol;
    fit.residuals.assign(r.data(), r.data() + r.size());
    fit.rms = std::sqrt(r.squaredNorm() / static_cast<double>(rows));
    return fit;
  }
  return fit;
}

std::vector<double> polynomial_regressors(const Notion& notion, const Cell& c) {
  const double x = std::log(eps_scale(notion.growth, c.eps));
  const double ld = std::log(static_cast<double>(c.d));
  switch (notion.type) {
    case NotionType::spt: return {x};
    case NotionType::pt: return {x, ld};
    case NotionType::qpt: {
      const double inner = notion.growth == Growth::algebraic
                               ? 1.0 + std::log(1.0 / c.eps)
                               : 1.0 + std::log(1.0 + std::log(1.0 / c.eps));
      return {(1.0 + ld) * inner};
    }
    default: return {};
  }
}

std::vector<std::string> exponent_names(NotionType type) {
  switch (type) {
    case NotionType::spt: return {"p"};
    case NotionType::pt: return {"p", "q"};
    case NotionType::qpt: return {"t"};
    default: return {};
  }
}

std::size_t distinct(const std::vector<Cell>& cells, bool inner_only, bool by_eps) {
  std::set<double> seen;
  for (const auto& c : cells)
    if (!inner_only || c.inner) seen.insert(by_eps ? c.eps : static_cast<double>(c.d));
  return seen.size();
}

// Previous cell of each grid line through c (smaller d, larger eps).
std::vector<const Cell*> previous_on_lines(const std::vector<Cell>& cells, const Cell& c,
                                           double eps_min, int d_max) {
  const Cell* by_d = nullptr;
  const Cell* by_eps = nullptr;
  for (const auto& o : cells) {
    if (c.d == d_max && o.eps == c.eps && o.d < c.d && (!by_d || o.d > by_d->d)) by_d = &o;
    if (c.eps == eps_min && o.d == c.d && o.eps > c.eps && (!by_eps || o.eps < by_eps->eps))
      by_eps = &o;
  }
  std::vector<const Cell*> out;
  if (by_d) out.push_back(by_d);
  if (by_eps) out.push_back(by_eps);
  return out;
}

// n <= exp(t x), x = (1 + ln d) (1 + ln 1/eps), with t the largest inner ratio
// ln n / x. An outer cell above the bound still passes when, along each grid
// line, ln n rises by at most twice what the bound allows over the same step;
// both sides scale with the spacing, so refining the grid keeps the verdict.
void classify_quasi_polynomial(const std::vector<Cell>& cells, TractabilityReport& rep) {
  constexpr double kRoundingSlack = 0.1;
  constexpr double kSlopeFactor = 2.0;
  const auto x_of = [&rep](const Cell& c) { return polynomial_regressors(rep.notion, c)[0]; };
  double t_inner = 0.0, t_all = 0.0, eps_min = INFINITY;
  int d_max = 0;
  for (const auto& c : cells) {
    t_all = std::max(t_all, c.log_n / x_of(c));
    if (c.inner) t_inner = std::max(t_inner, c.log_n / x_of(c));
    eps_min = std::min(eps_min, c.eps);
    d_max = std::max(d_max, c.d);
  }
  bool holds = true;
  for (const auto& c : cells) {
    if (c.inner || c.log_n <= t_inner * x_of(c) + kRoundingSlack) continue;
    for (const Cell* prev : previous_on_lines(cells, c, eps_min, d_max))
      if (c.log_n - prev->log_n > kSlopeFactor * t_inner * (x_of(c) - x_of(*prev)) + kRoundingSlack)
        holds = false;
  }
  rep.verdict = holds ? Verdict::consistent : Verdict::inconsistent;
  rep.exponents["C"] = 1.0;
  rep.exponents["t"] = holds ? t_all : t_inner;
  if (!holds) rep.note = "outer grid cells grow faster than the bound fitted on the inner grid";
}

void classify_polynomial(const std::vector<Cell>& cells, TractabilityReport& rep) {
  const Notion& notion = rep.notion;
  if (distinct(cells, true, true) < 2 ||
      (notion.type == NotionType::pt && distinct(cells, true, false) < 2)) {
    rep.note = "inner grid too small to fit the exponents";
    return;
  }
  if (notion.type == NotionType::qpt) {
    classify_quasi_polynomial(cells, rep);
    return;
  }
  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (const auto& c : cells)
    if (c.inner) {
      X.push_back(polynomial_regressors(notion, c));
      y.push_back(c.log_n);
    }
  const Fit fit = nonnegative_fit(X, y);
  if (!fit.ok) {
    rep.note = "regressors are collinear on the inner grid";
    return;
  }
  const double log_c = fit.intercept + *std::max_element(fit.residuals.begin(), fit.residuals.end());
  const auto names = exponent_names(notion.type);
  for (std::size_t j = 0; j < names.size(); ++j) rep.exponents[names[j]] = fit.coef[j];
  rep.exponents["C"] = std::exp(log_c);
  rep.residual = fit.rms;

  bool holds = true;
  double log_c_all = log_c;
  for (const auto& c : cells) {
    const auto x = polynomial_regressors(notion, c);
    double slope_part = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) slope_part += fit.coef[j] * x[j];
    log_c_all = std::max(log_c_all, c.log_n - slope_part);
    if (!c.inner && c.log_n > log_c + slope_part + std::log(2.0)) holds = false;
  }
  rep.verdict = holds ? Verdict::consistent : Verdict::inconsistent;
  if (holds) {
    // Reported constant covers every cell of the grid.
    rep.exponents["C"] = std::exp(log_c_all);
  } else {
    rep.note = "outer grid cells exceed the bound fitted on the inner grid";
  }
}

double weak_denominator(const Notion& notion, double eps, int d, double a, double b) {
  const double e = eps_scale(notion.growth, eps);
  return std::pow(e, a) + std::pow(static_cast<double>(d), b);
}

// Ratio ln n / denominator must decrease at the outer end of every grid line.
Verdict weak_verdict(const std::vector<Cell>& cells, const Notion& notion, double a, double b,
                     double* decay, double* residual) {
  std::map<double, std::vector<std::pair<int, double>>> by_eps;  // eps -> (d, ratio)
  std::map<int, std::vector<std::pair<double, double>>> by_d;    // d -> (1/eps, ratio)
  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (const auto& c : cells) {
    const double denom = weak_denominator(notion, c.eps, c.d, a, b);
    const double ratio = c.log_n / denom;
    by_eps[c.eps].push_back({c.d, ratio});
    by_d[c.d].push_back({1.0 / c.eps, ratio});
    if (ratio > 0.0) {
      X.push_back({std::log(denom)});
      y.push_back(std::log(ratio));
    }
  }
  if (decay) {
    *decay = std::numeric_limits<double>::quiet_NaN();
    if (y.size() >= 2) {
      // Plain least squares (the slope may be negative).
      Eigen::MatrixXd A(static_cast<Eigen::Index>(y.size()), 2);
      Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
      for (std::size_t i = 0; i < y.size(); ++i) {
        A(static_cast<Eigen::Index>(i), 0) = 1.0;
        A(static_cast<Eigen::Index>(i), 1) = X[i][0];
        v(static_cast<Eigen::Index>(i)) = y[i];
      }
      const auto qr = A.colPivHouseholderQr();
      if (qr.rank() == 2) {
        const Eigen::VectorXd sol = qr.solve(v);
        *decay = -sol(1);
        if (residual)
          *residual = std::sqrt((v - A * sol).squaredNorm() / static_cast<double>(y.size()));
      }
    }
  }

  bool any_line = false;
  bool all_decreasing = true;
  auto check_tail = [&](auto& line) {
    if (line.size() < 2) return;
    std::sort(line.begin(), line.end());
    any_line = true;
    const double last = line[line.size() - 1].second;
    const double prev = line[line.size() - 2].second;
    if (last > 0.0 && last >= prev) all_decreasing = false;
  };
  for (auto& [eps, line] : by_eps) check_tail(line);
  for (auto& [d, line] : by_d) check_tail(line);
  if (!any_line) return Verdict::inconclusive;
  return all_decreasing ? Verdict::consistent : Verdict::inconsistent;
}

}  // namespace

TractabilityReport classify(const ComplexityTable& table, const Notion& notion) {
  TractabilityReport rep;
  rep.notion = notion;
  std::set<double> eps_set;
  std::set<int> d_set;
  for (const auto& row : table.rows) {
    eps_set.insert(row.eps);
    d_set.insert(row.d);
  }
  rep.eps_grid.assign(eps_set.rbegin(), eps_set.rend());
  rep.d_grid.assign(d_set.begin(), d_set.end());

  if (eps_set.size() < 2 || d_set.size() < 2) {
    rep.note = "degenerate grid: need at least two eps and two d values";
    return rep;
  }
  const double eps_min = *eps_set.begin();
  const int d_max = *d_set.rbegin();
  std::vector<Cell> cells;
  for (const auto& row : table.rows) {
    if (!row.n_wor.is_finite()) {
      rep.note = "table has cells beyond the truncation";
      return rep;
    }
    const double n = std::max<double>(1.0, row.n_wor.as_double());
    cells.push_back({row.eps, row.d, std::log(n), row.eps > eps_min && row.d < d_max});
  }

  switch (notion.type) {
    case NotionType::spt:
    case NotionType::pt:
    case NotionType::qpt:
      classify_polynomial(cells, rep);
      break;
    case NotionType::wt: {
      double decay = 0.0;
      rep.verdict = weak_verdict(cells, notion, 1.0, 1.0, &decay, &rep.residual);
      rep.exponents["decay"] = decay;
      break;
    }
    case NotionType::st_wt: {
      double decay = 0.0;
      rep.verdict = weak_verdict(cells, notion, notion.s, notion.t, &decay, &rep.residual);
      rep.exponents["decay"] = decay;
      break;
    }
    case NotionType::uwt: {
      bool any_inconsistent = false;
      bool all_consistent = true;
      for (double a : kUniformWeakParams)
        for (double b : kUniformWeakParams) {
          const Verdict v = weak_verdict(cells, notion, a, b, nullptr, nullptr);
          rep.pairs.push_back({a, b, v});
          any_inconsistent |= v == Verdict::inconsistent;
          all_consistent &= v == Verdict::consistent;
        }
      double decay = 0.0;
      weak_verdict(cells, notion, 1.0, 1.0, &decay, &rep.residual);
      rep.exponents["decay"] = decay;
      rep.verdict = any_inconsistent ? Verdict::inconsistent
                    : all_consistent ? Verdict::consistent
                                     : Verdict::inconclusive;
      rep.note = "alpha, beta restricted to {0.5, 1, 2}";
      break;
    }
  }
  return rep;
}

std::vector<TransferRow> transfer_report(const ComplexityTable& table) {
  auto ratio = [](double bound, const Count& n) {
    if (!n.is_finite() || n.as_double() < 2.0 || !std::isfinite(bound))
      return std::numeric_limits<double>::quiet_NaN();
    return std::log(bound) / std::log(n.as_double());
  };
  std::vector<TransferRow> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    TransferRow t;
    t.eps = row.eps;
    t.d = row.d;
    t.n_wor = row.n_wor;
    t.n_wor_quarter = row.n_wor_quarter;
    t.n_wor_scaled = row.n_wor_scaled;
    t.mean_bound_log = row.mean_bound_log;
    t.mean_bound_pow = row.mean_bound_pow;
    t.prob_bound_log = row.prob_bound_log;
    t.prob_bound_pow = row.prob_bound_pow;
    t.ratio_mean_log = ratio(row.mean_bound_log, row.n_wor);
    t.ratio_mean_pow = ratio(row.mean_bound_pow, row.n_wor);
    t.ratio_prob_log = ratio(row.prob_bound_log, row.n_wor);
    t.ratio_prob_pow = ratio(row.prob_bound_pow, row.n_wor);
    out.push_back(t);
  }
  return out;
}

std::string summarize(std::span<const TractabilityReport> reports) {
  std::ostringstream os;
  os << std::setprecision(4);
  for (const auto& r : reports) {
    os << std::left << std::setw(16) << r.notion.name() << std::setw(14) << to_string(r.verdict);
    for (const auto& [k, v] : r.exponents)
      if (k != "C") os << " " << k << "=" << v;
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
  }
  os << "verdicts are finite-grid heuristics and cannot certify asymptotic notions\n";
  return os.str();
}

}  // namespace wlsapprox
