#pragma once

#include <span>
#include <vector>

namespace oplip {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
QuadratureRule composite_gauss_legendre(int order, int panels, double lo, double hi);

// Composite rule over [lo, hi] split at every breakpoint strictly inside the
// interval; each piece gets ceil(length / max_panel) panels.
QuadratureRule piecewise_gauss_legendre(int order, double max_panel, double lo, double hi,
                                        std::span<const double> breakpoints);

}  // namespace oplip
