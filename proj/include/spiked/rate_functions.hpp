#pragma once

// Large-deviation rate functions of the overlap <x, x'> between two
// independent spikes, plus exact finite-n tail probabilities.
//
// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spiked/entropy.hpp"
#include "spiked/errors.hpp"
#include "spiked/numeric.hpp"
#include "spiked/prior.hpp"

namespace spiked {

/// Spherical prior: -1/2 log(1 - t^2) on [0, 1).
inline double rate_spherical(double t) {
  if (!(t >= 0.0)) throw std::domain_error("rate_spherical: t must be >= 0");
  if (t >= 1.0) throw std::domain_error("rate_spherical: diverges at t >= 1 (collision entropy is infinite)");
  return -0.5 * std::log1p(-t * t);
}

/// Rademacher prior: log 2 - H((1 + t)/2) on [0, 1].
inline double rate_rademacher(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("rate_rademacher: t must lie in [0, 1]");
  // equals ((1+t)log(1+t) + (1-t)log(1-t)) / 2, evaluated without cancellation
  return 0.5 * (detail::one_plus_u_log_minus_u(t) + detail::one_plus_u_log_minus_u(-t));
}

/// Entropy term of the sparse Rademacher prior,
///   G(zeta) = -H({zeta, rho - zeta, rho - zeta, 1 - 2 rho + zeta}) + 2 H(rho),
/// on zeta in [max(0, 2 rho - 1), rho].
///
/// G is the KL divergence of the support-overlap law from the product law
/// {rho^2, rho(1-rho), rho(1-rho), (1-rho)^2}; it is evaluated in that form so
/// that values near the minimum at zeta = rho^2 keep full relative precision.
inline double entropy_term_G(double zeta, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::domain_error("entropy_term_G: rho must lie in (0, 1]");
  const double lo = std::max(0.0, 2.0 * rho - 1.0);
  const double slack = 1e-12;
  if (!(zeta >= lo - slack && zeta <= rho + slack))
    throw std::domain_error("entropy_term_G: zeta outside [max(0, 2 rho - 1), rho]");
  zeta = std::clamp(zeta, lo, rho);
  if (rho == 1.0) return 0.0;
  const double q = 1.0 - rho;
  const double delta = zeta - rho * rho;
  using detail::one_plus_u_log_minus_u;
  return rho * rho * one_plus_u_log_minus_u(delta / (rho * rho)) +
         2.0 * rho * q * one_plus_u_log_minus_u(-delta / (rho * q)) +
         q * q * one_plus_u_log_minus_u(delta / (q * q));
}

struct SparseRateValue {
  double value = 0.0;
  double zeta_star = 0.0;  // minimizing support-overlap fraction
};

/// Sparse Rademacher rate function with its minimizing zeta:
///   f_rho(t) = min_{zeta in [max(rho t, 2 rho - 1, 0), rho]} G(zeta) + zeta f_Rade(rho t / zeta).
/// The objective is convex in zeta; a 1000-point grid (half uniform, half
/// geometric toward the lower end) localizes the basin and golden-section
/// search polishes it to 1e-10 of the interval width.
inline SparseRateValue sparse_rate_detail(double t, double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::domain_error("rate_sparse_rademacher: rho must lie in (0, 1]");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("rate_sparse_rademacher: t must lie in [0, 1]");
  if (t == 0.0) return {0.0, rho * rho};
  const double lo = std::max({0.0, 2.0 * rho - 1.0, rho * t});
  const double hi = rho;
  auto objective = [&](double zeta) {
    if (zeta <= 0.0) return entropy_term_G(0.0, rho);
    double arg = std::min(1.0, rho * t / zeta);
    return entropy_term_G(zeta, rho) + zeta * rate_rademacher(arg);
  };
  if (hi - lo <= 1e-15 * rho) return {objective(hi), hi};

  std::vector<double> grid;
  grid.reserve(1002);
  const double width = hi - lo;
  for (double s : numeric::linspace(0.0, 1.0, 500)) grid.push_back(lo + s * width);
  for (double s : numeric::logspace(1e-12, 1.0, 500)) grid.push_back(lo + s * width);
  numeric::sort_unique(grid);
  auto best = numeric::grid_then_golden_min(objective, grid, 1e-10 * width);
  return {std::max(0.0, best.value), best.x};
}

inline double rate_sparse_rademacher(double t, double rho) { return sparse_rate_detail(t, rho).value; }

/// F = lim_{t -> 1-} f(t): +inf (spherical), log 2 (Rademacher), H(rho) + rho log 2 (sparse).
inline double collision_entropy(const SpikePrior& prior) {
  switch (prior.kind()) {
    case PriorKind::spherical: return std::numeric_limits<double>::infinity();
    case PriorKind::rademacher: return std::numbers::ln2;
    case PriorKind::sparse_rademacher: {
      double rho = *prior.rho();
      return binary_entropy(rho) + rho * std::numbers::ln2;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Evaluable rate function of a prior together with its collision entropy and
/// local-subgaussian constant sigma^2.
///
/// sigma^2 is 1 for the spherical and Rademacher priors. For the sparse prior
/// it is estimated as 1/f''(0) from the curvature of f_rho at the origin, and
/// `sigma2_is_curvature_estimate()` reports that provenance.
class RateFunction {
 public:
  explicit RateFunction(SpikePrior prior) : prior_(std::move(prior)) {
    if (prior_.kind() == PriorKind::sparse_rademacher) {
      // Richardson-extrapolated second difference of f at 0, with a step well
      // below rho where f is still quadratic.
      const double h = 1e-2 * std::min(1.0, *prior_.rho());
      double c1 = 2.0 * (*this)(h) / (h * h);
      double c2 = 2.0 * (*this)(h / 2) / (h * h / 4);
      double curvature = (4.0 * c2 - c1) / 3.0;
      sigma2_ = 1.0 / curvature;
      sigma2_estimated_ = true;
    }
  }

  [[nodiscard]] const SpikePrior& prior() const noexcept { return prior_; }

  double operator()(double t) const {
    switch (prior_.kind()) {
      case PriorKind::spherical: return rate_spherical(t);
      case PriorKind::rademacher: return rate_rademacher(t);
      case PriorKind::sparse_rademacher: return rate_sparse_rademacher(t, *prior_.rho());
    }
    throw std::logic_error("RateFunction: unknown prior");
  }

  /// Whether f is finite (and evaluable) at t = 1.
  [[nodiscard]] bool defined_at_one() const noexcept { return prior_.is_discrete(); }

  [[nodiscard]] double collision_entropy() const { return spiked::collision_entropy(prior_); }
  [[nodiscard]] double local_subgaussian_sigma2() const noexcept { return sigma2_; }
  [[nodiscard]] bool sigma2_is_curvature_estimate() const noexcept { return sigma2_estimated_; }

 private:
  SpikePrior prior_;
  double sigma2_ = 1.0;
  bool sigma2_estimated_ = false;
};

// ---------------------------------------------------------------------------
// Exact finite-n overlap tails
// ---------------------------------------------------------------------------

inline constexpr std::size_t kExactTailMaxN = 200;

namespace detail {

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : terms) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : terms) s += std::exp(v - m);
  return m + std::log(s);
}

/// log Pr[Bin(m, 1/2) >= a]
inline double log_binomial_half_tail(std::size_t m, double a) {
  double a_min = std::max(0.0, std::ceil(a));
  if (a_min > static_cast<double>(m)) return -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (auto j = static_cast<std::size_t>(a_min); j <= m; ++j)
    terms.push_back(log_binomial(static_cast<double>(m), static_cast<double>(j)) -
                    static_cast<double>(m) * std::numbers::ln2);
  return std::min(0.0, log_sum_exp(terms));
}

// Overlaps are rational; this slack absorbs rounding in the threshold t.
inline constexpr double kOverlapSlack = 1e-12;

inline double log_beta_tail_symmetric(double a, double u0) {
  // log of I_{1 - u0}(a, a) = Pr[Beta(a, a) >= u0] for u0 in [1/2, 1), a > 1
  auto log_kernel = [a](double u) { return (a - 1.0) * (std::log(u) + std::log1p(-u)); };
  const double base = log_kernel(u0);
  // integrand below e^-80 relative to its value at u0 is dropped
  const double u_max = std::nextafter(1.0, 0.0);
  double s_end = 0.0;
  if (log_kernel(u_max) - base < -80.0)
    s_end = std::sqrt(1.0 - numeric::bisect([&](double u) { return log_kernel(u) - base + 80.0; }, u0, u_max, 1e-15).x);
  // u = 1 - s^2 turns the (1 - u)^(a - 1) endpoint factor into a power of s
  auto g = [&](double s) {
    if (s <= 0.0) return 0.0;
    double log_k = (a - 1.0) * (std::log1p(-s * s) + 2.0 * std::log(s));
    return 2.0 * s * std::exp(log_k - base);
  };
  double err = 0.0;
  double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, s_end, std::sqrt(1.0 - u0), 15, 1e-14, &err);
  double log_b = 2.0 * std::lgamma(a) - std::lgamma(2.0 * a);
  return base - log_b + std::log(integral);
}

}  // namespace detail

/// Hyp(n, k, k) pmf of the support-overlap count z for two sparse spikes with
/// k nonzeros each; index z runs over 0..k (infeasible entries are zero).
inline std::vector<double> hypergeometric_overlap_pmf(std::size_t n, std::size_t k) {
  if (k > n) throw std::domain_error("hypergeometric_overlap_pmf: k > n");
  std::vector<double> pmf(k + 1, 0.0);
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  const double log_total = detail::log_binomial(nn, kk);
  for (std::size_t z = 0; z <= k; ++z) {
    if (k - z > n - k) continue;
    double zz = static_cast<double>(z);
    pmf[z] = std::exp(detail::log_binomial(kk, zz) + detail::log_binomial(nn - kk, kk - zz) - log_total);
  }
  return pmf;
}

/// log Pr[<x, x'> >= t] for independent x, x' from `prior` in dimension n.
///
/// Rademacher: exact binomial tail. Sparse: hypergeometric mixture of
/// binomial tails over the support overlap. Spherical: Beta(n/2, n/2) tail
/// integrated adaptively (Gauss-Kronrod) to ~1e-12 relative accuracy. The
/// overlap of two uniform unit vectors is exactly Beta((n-1)/2, (n-1)/2)
/// distributed; both laws share the rate -1/2 log(1 - t^2).
inline double exact_overlap_log_tail(const SpikePrior& prior, std::size_t n, double t) {
  if (n < 1) throw std::domain_error("exact_overlap_tail: n must be >= 1");
  if (std::isnan(t)) throw std::domain_error("exact_overlap_tail: t is NaN");
  const double nn = static_cast<double>(n);
  switch (prior.kind()) {
    case PriorKind::rademacher: {
      if (n > kExactTailMaxN)
        throw CapacityError("exact_overlap_tail: n exceeds the exact-combinatorics cap of 200");
      // overlap = (2A - n)/n with A ~ Bin(n, 1/2) agreements
      return detail::log_binomial_half_tail(n, nn * (1.0 + t) / 2.0 - detail::kOverlapSlack * nn);
    }
    case PriorKind::sparse_rademacher: {
      if (n > kExactTailMaxN)
        throw CapacityError("exact_overlap_tail: n exceeds the exact-combinatorics cap of 200");
      std::size_t k = prior.support_size(n);
      if (k < 1) throw std::domain_error("exact_overlap_tail: sparse prior has empty support");
      const double kk = static_cast<double>(k);
      auto pmf = hypergeometric_overlap_pmf(n, k);
      std::vector<double> terms;
      for (std::size_t z = 0; z <= k; ++z) {
        if (pmf[z] <= 0.0) continue;
        // overlap = (2A - z)/k with A ~ Bin(z, 1/2)
        double lt = detail::log_binomial_half_tail(z, (t * kk + static_cast<double>(z)) / 2.0 -
                                                          detail::kOverlapSlack * kk);
        if (std::isfinite(lt)) terms.push_back(std::log(pmf[z]) + lt);
      }
      if (terms.empty()) return -std::numeric_limits<double>::infinity();
      return std::min(0.0, detail::log_sum_exp(terms));
    }
    case PriorKind::spherical: {
      if (t <= -1.0) return 0.0;
      if (n == 1) return t <= 1.0 ? -std::numbers::ln2 : -std::numeric_limits<double>::infinity();
      if (t >= 1.0) return -std::numeric_limits<double>::infinity();
      if (n == 2) return std::log((1.0 - t) / 2.0);
      const double a = nn / 2.0;
      if (t < 0.0) {
        double upper = std::exp(detail::log_beta_tail_symmetric(a, (1.0 - t) / 2.0));
        return std::log1p(-upper);
      }
      return std::min(0.0, detail::log_beta_tail_symmetric(a, (1.0 + t) / 2.0));
    }
  }
  throw std::logic_error("exact_overlap_tail: unknown prior");
}

inline double exact_overlap_tail(const SpikePrior& prior, std::size_t n, double t) {
  return std::exp(exact_overlap_log_tail(prior, n, t));
}

enum class TailMethod { binomial, hypergeometric_compound, incomplete_beta };

/// Exact tail Pr[<x, x'> >= t] bound to a prior and dimension.
struct OverlapTailOracle {
  SpikePrior prior;
  std::size_t n;

  [[nodiscard]] TailMethod method() const noexcept {
    switch (prior.kind()) {
      case PriorKind::rademacher: return TailMethod::binomial;
      case PriorKind::sparse_rademacher: return TailMethod::hypergeometric_compound;
      case PriorKind::spherical: return TailMethod::incomplete_beta;
    }
    return TailMethod::binomial;
  }
  double operator()(double t) const { return exact_overlap_tail(prior, n, t); }
  /// Finite-n rate -(1/n) log Pr[<x, x'> >= t].
  [[nodiscard]] double rate(double t) const {
    return -exact_overlap_log_tail(prior, n, t) / static_cast<double>(n);
  }
};

}  // namespace spiked
