#pragma once

// Expectations over a standard normal by composite Gauss-Legendre
// quadrature on a truncated interval.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spiked {

class GaussQuadrature {
 public:
  /// `panels` equal panels on [-half_width, half_width], `order` Legendre
  /// nodes each. The weights include the normal density.
  explicit GaussQuadrature(std::size_t panels = 40, std::size_t order = 10, double half_width = 10.0) {
    if (panels < 1 || order < 1 || !(half_width > 0.0))
      throw std::invalid_argument("GaussQuadrature: need panels, order >= 1 and half_width > 0");
    std::vector<double> x, w;
    legendre(order, x, w);
    const double width = 2.0 * half_width / static_cast<double>(panels);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    nodes_.reserve(panels * order);
    weights_.reserve(panels * order);
    for (std::size_t p = 0; p < panels; ++p) {
      double a = -half_width + width * static_cast<double>(p);
      for (std::size_t i = 0; i < order; ++i) {
        double z = a + 0.5 * width * (x[i] + 1.0);
        nodes_.push_back(z);
        weights_.push_back(0.5 * width * w[i] * inv_sqrt_2pi * std::exp(-0.5 * z * z));
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

  /// E f(z) for z ~ N(0, 1).
  template <class F>
  double expect(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

 private:
  // Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
  static void legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double r = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
      double dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = r;
        for (std::size_t k = 2; k <= n; ++k) {
          double kk = static_cast<double>(k);
          double p2 = ((2.0 * kk - 1.0) * r * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = nn * (r * p1 - p0) / (r * r - 1.0);
        double step = p1 / dp;
        r -= step;
        if (std::abs(step) < 1e-16) break;
      }
      x[i] = -r;
      x[n - 1 - i] = r;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared default rule: 40 panels x 10 nodes on [-10, 10].
inline const GaussQuadrature& default_quadrature() {
  static const GaussQuadrature rule;
  return rule;
}

}  // namespace spiked
