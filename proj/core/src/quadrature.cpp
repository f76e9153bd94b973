#include "wlsapprox/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "wlsapprox/errors.hpp"
#include "wlsapprox/stats.hpp"

namespace wlsapprox {

QuadratureRule gauss_legendre(std::size_t n, double lo, double hi) {
  if (n == 0) throw ParameterError("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const auto jd = static_cast<double>(j);
        const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double tensor_integrate(const QuadratureRule& rule, int d,
                        const std::function<double(std::span<const double>)>& f) {
  const std::size_t q = rule.nodes.size();
  std::vector<std::size_t> digit(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  CompensatedSum total;
  while (true) {
    double w = 1.0;
    for (int nu = 0; nu < d; ++nu) {
      x[nu] = rule.nodes[digit[nu]];
      w *= rule.weights[digit[nu]];
    }
    total.add(w * f(x));

    int nu = 0;
    while (nu < d && ++digit[nu] == q) digit[nu++] = 0;
    if (nu == d) break;
  }
  return total.value();
}

}  // namespace wlsapprox
