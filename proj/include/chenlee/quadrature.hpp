#pragma once

#include <cmath>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chenlee/errors.hpp"

namespace chenlee::detail {

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule by Newton iteration on P_n; exact for degree 2n-1.
inline const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 32) throw precondition_error("gauss_legendre: order must be in [1,32]");
  thread_local std::unordered_map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n.
    double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / double(j);
        p0 = p1;
        p1 = p2;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[std::size_t(n - 1 - i)] = x;
    rule.weights[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace chenlee::detail
