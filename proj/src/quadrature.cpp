#include "oplip/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "oplip/core.hpp"

namespace oplip {

namespace {

// Nodes and weights on [-1, 1] by Newton iteration on P_n, seeded with the
// Tricomi initial guesses.
void legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  // P_n(z) and P_n'(z) by the three-term recurrence
  auto legendre = [n](double z, double& p, double& dp) {
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
  };
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(z, p, dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.5 * (lo + hi)};
    rule.weights = {hi - lo};
    return rule;
  }
  static std::mutex cache_mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::vector<double> x, w;
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
      legendre_reference(n, x, w);
      cache.emplace(n, std::make_pair(x, w));
    } else {
      x = it->second.first;
      w = it->second.second;
    }
  }
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int order, int panels, double lo, double hi) {
  if (panels < 1) throw DomainError("composite_gauss_legendre: need at least one panel");
  const QuadratureRule ref = gauss_legendre(order);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(order) * panels);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double mid = a + 0.5 * width;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      rule.nodes.push_back(mid + 0.5 * width * ref.nodes[i]);
      rule.weights.push_back(0.5 * width * ref.weights[i]);
    }
  }
  return rule;
}

QuadratureRule piecewise_gauss_legendre(int order, double max_panel, double lo, double hi,
                                        std::span<const double> breakpoints) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  QuadratureRule rule;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(len / max_panel)));
    QuadratureRule piece = composite_gauss_legendre(order, panels, cuts[i], cuts[i + 1]);
    rule.nodes.insert(rule.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    rule.weights.insert(rule.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return rule;
}

}  // namespace oplip
