#pragma once

// Entropy primitives (natural logarithms, 0 log 0 := 0).

#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace spiked {

namespace detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// (1 + u) log(1 + u) - u for u >= -1, accurate near u = 0.
inline double one_plus_u_log_minus_u(double u) {
  if (u <= -1.0) return 1.0;  // limit at u = -1
  if (std::abs(u) < 1e-3) {
    // u^2/2 - u^3/6 + u^4/12 - u^5/20 + u^6/30
    double u2 = u * u;
    return u2 * (0.5 + u * (-1.0 / 6.0 + u * (1.0 / 12.0 + u * (-1.0 / 20.0 + u / 30.0))));
  }
  return (1.0 + u) * std::log1p(u) - u;
}

}  // namespace detail

/// Binary entropy -p log p - (1-p) log(1-p).
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

/// -sum p_i log p_i. Entries need not sum to one.
inline double multi_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::domain_error("multi_entropy: entries must be nonnegative");
    h -= detail::xlogx(p);
  }
  return h;
}

inline double multi_entropy(std::initializer_list<double> probs) {
  return multi_entropy(std::span<const double>(probs.begin(), probs.size()));
}

}  // namespace spiked
