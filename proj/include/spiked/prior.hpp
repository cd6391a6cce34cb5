#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "spiked/entropy.hpp"

namespace spiked {

enum class PriorKind { spherical, rademacher, sparse_rademacher };

/// Distribution of the planted unit vector.
///
/// - spherical: uniform on the unit sphere;
/// - rademacher: iid +-1/sqrt(n) coordinates;
/// - sparse_rademacher(rho): a uniformly random support of exactly round(rho n)
///   coordinates carrying +-1/sqrt(round(rho n)), zeros elsewhere.
///
/// round() is round-half-up. Construct through the named factories.
class SpikePrior {
 public:
  static SpikePrior spherical() { return SpikePrior(PriorKind::spherical, std::nullopt); }
  static SpikePrior rademacher() { return SpikePrior(PriorKind::rademacher, std::nullopt); }
  static SpikePrior sparse(double rho) {
    if (!(rho > 0.0 && rho <= 1.0))
      throw std::domain_error("sparse prior: rho must lie in (0, 1]");
    return SpikePrior(PriorKind::sparse_rademacher, rho);
  }

  [[nodiscard]] PriorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::optional<double> rho() const noexcept { return rho_; }
  [[nodiscard]] bool is_discrete() const noexcept { return kind_ != PriorKind::spherical; }

  /// lim (1/n) log |supp|; absent for the spherical prior.
  [[nodiscard]] std::optional<double> support_log_density() const {
    switch (kind_) {
      case PriorKind::spherical: return std::nullopt;
      case PriorKind::rademacher: return std::numbers::ln2;
      case PriorKind::sparse_rademacher: return binary_entropy(*rho_) + *rho_ * std::numbers::ln2;
    }
    return std::nullopt;
  }

  /// Number of nonzero coordinates of a sample in dimension n.
  [[nodiscard]] std::size_t support_size(std::size_t n) const {
    if (kind_ != PriorKind::sparse_rademacher) return n;
    return static_cast<std::size_t>(std::floor(*rho_ * static_cast<double>(n) + 0.5));
  }

  /// log |supp| in dimension n (exact combinatorics); +inf for spherical.
  [[nodiscard]] double log_support_count(std::size_t n) const {
    switch (kind_) {
      case PriorKind::spherical: return INFINITY;
      case PriorKind::rademacher: return static_cast<double>(n) * std::numbers::ln2;
      case PriorKind::sparse_rademacher: {
        double k = static_cast<double>(support_size(n));
        double nn = static_cast<double>(n);
        return std::lgamma(nn + 1) - std::lgamma(k + 1) - std::lgamma(nn - k + 1) +
               k * std::numbers::ln2;
      }
    }
    return INFINITY;
  }

  [[nodiscard]] std::string name() const {
    switch (kind_) {
      case PriorKind::spherical: return "spherical";
      case PriorKind::rademacher: return "rademacher";
      case PriorKind::sparse_rademacher: return "sparse";
    }
    return "unknown";
  }

  friend bool operator==(const SpikePrior&, const SpikePrior&) = default;

 private:
  SpikePrior(PriorKind kind, std::optional<double> rho) : kind_(kind), rho_(rho) {}

  PriorKind kind_;
  std::optional<double> rho_;
};

}  // namespace spiked
