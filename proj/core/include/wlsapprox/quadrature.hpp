#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wlsapprox {

/// Quadrature rule on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n, double lo = -1.0, double hi = 1.0);

/// Tensor-product integral of f over the box [lo, hi]^d with the given 1-d rule on [lo, hi].
double tensor_integrate(const QuadratureRule& rule, int d,
                        const std::function<double(std::span<const double>)>& f);

}  // namespace wlsapprox
