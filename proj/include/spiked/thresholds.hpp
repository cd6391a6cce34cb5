#pragma once

// Rigorous threshold bounds: the noise-conditioned lower bound lambda*, the
// injective norm mu_d, the spiked-norm bound L_d and the spherical upper bound
// Lambda*, the cardinality/entropy upper bounds for discrete priors, and the
// large-d / small-rho asymptotic expressions.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiked/errors.hpp"
#include "spiked/numeric.hpp"
#include "spiked/prior.hpp"
#include "spiked/rate_functions.hpp"

namespace spiked {

struct LowerBound {
  double lambda = 0.0;
  double t_star = 0.0;        // minimizer of (1 + t^d)/t^d f(t)
  double ratio = 0.0;         // the minimum value
  bool capped = false;        // d = 2 result limited by 1/sigma
  double uncapped_lambda = 0.0;
};

namespace detail {

inline std::vector<double> lower_bound_grid(bool include_one) {
  auto grid = numeric::unit_interval_grid(10000, 1e-8, 1e-14);
  if (include_one) grid.push_back(1.0);
  return grid;
}

}  // namespace detail

/// lambda* = sqrt(2 inf_{t in (0,1)} (1 + t^d)/t^d f(t)); for discrete priors
/// t = 1 is admitted, where the ratio is 2F. For d = 2 the result is further
/// capped at 1/sigma.
inline LowerBound lower_bound_lambda(const RateFunction& rate, int d) {
  if (d < 2) throw std::domain_error("lower_bound_lambda: d must be >= 2");
  const double dd = static_cast<double>(d);
  auto ratio = [&](double t) {
    if (t <= 0.0) return std::numeric_limits<double>::infinity();
    double f = rate(t);
    // (1 + t^d)/t^d = 1 + exp(-d log t)
    return f * (1.0 + std::exp(-dd * std::log(t)));
  };
  auto best = numeric::grid_then_golden_min(ratio, detail::lower_bound_grid(rate.defined_at_one()), 1e-10);
  LowerBound out;
  out.t_star = best.x;
  out.ratio = best.value;
  out.uncapped_lambda = std::sqrt(2.0 * best.value);
  out.lambda = out.uncapped_lambda;
  if (d == 2) {
    double cap = 1.0 / std::sqrt(rate.local_subgaussian_sigma2());
    if (out.lambda > cap) {
      out.lambda = cap;
      out.capped = true;
    }
  }
  return out;
}

struct Tangency {
  double t_star = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
};

/// Spherical lambda* via the tangency point of lambda^2/2 t^d/(1+t^d) and
/// -1/2 log(1 - t^2). The tangency equation is solved in s = 1 - t by
/// geometric bisection so that t_star -> 1 is resolved at large d.
inline Tangency spherical_tangency(int d) {
  if (d < 3) throw std::domain_error("spherical_tangency: d must be >= 3");
  const double dd = static_cast<double>(d);
  auto h = [dd](double s) {
    double t = 1.0 - s;
    double one_minus_t2 = s * (2.0 - s);
    double log_one_minus_t2 = t < 0.5 ? std::log1p(-t * t) : std::log(one_minus_t2);
    double td = std::exp(dd * std::log1p(-s));
    return (2.0 / dd) * (1.0 + td) * t * t / one_minus_t2 + log_one_minus_t2;
  };
  auto root = numeric::bisect(h, 1e-30, 1.0 - 1e-10, 0.0, 400, true);
  const double s = root.x;
  const double t = 1.0 - s;
  const double td = std::exp(dd * std::log1p(-s));
  const double td2 = std::exp((dd - 2.0) * std::log1p(-s));
  const double lambda2 = 2.0 * (1.0 + td) * (1.0 + td) / (dd * s * (2.0 - s) * td2);
  return {t, std::sqrt(lambda2), root.residual};
}

struct InjectiveNorm {
  double mu = 0.0;
  double x = 0.0;
  double residual = 0.0;
};

/// Limit of the injective norm of a pure Wigner d-tensor.
inline InjectiveNorm injective_norm_mu(int d) {
  if (d < 3) throw std::domain_error("injective_norm_mu: d must be >= 3");
  const double dd = static_cast<double>(d);
  auto g = [dd](double x) {
    double disc = std::sqrt(std::max(0.0, x * x - 4.0 * (dd - 1.0)));
    // (x - disc)/((d-1) sqrt(2d)), rationalized
    double z = 4.0 / ((x + disc) * std::sqrt(2.0 * dd));
    double z2 = z * z;
    return (2.0 - dd) / dd - std::log(dd * z2 / 2.0) + (dd - 1.0) * z2 / 2.0 - 2.0 / (dd * dd * z2);
  };
  const double lo = 2.0 * std::sqrt(dd - 1.0);
  double hi = std::sqrt(dd * (2.0 * std::log(dd) + 2.0 * std::log(std::log(dd)) + 4.0));
  if ((g(lo) < 0.0) == (g(hi) < 0.0)) hi *= 2.0;
  auto root = numeric::bisect(g, lo, hi, 1e-13 * hi);
  return {root.x * std::sqrt(2.0 / dd), root.x, root.residual};
}

struct SpikedNormBound {
  double L = 0.0;
  double m_star = 0.0;
  double beta = 0.0;
};

/// L_d(lambda) = max_{m in [0,1]} m^d (lambda + sqrt(2d/(d-1)) sqrt(M (1 + M))),
/// M = (d-1)(1 - m^2)/m^2.
inline SpikedNormBound spiked_norm_lower_Ld(int d, double lambda) {
  if (d < 3) throw std::domain_error("spiked_norm_lower_Ld: d must be >= 3");
  if (!(lambda >= 0.0)) throw std::domain_error("spiked_norm_lower_Ld: lambda must be >= 0");
  const double dd = static_cast<double>(d);
  const double c = std::sqrt(2.0 * dd / (dd - 1.0));
  auto value = [&](double m) {
    if (m <= 0.0) return 0.0;
    double M = (dd - 1.0) * (1.0 - m) * (1.0 + m) / (m * m);
    return std::pow(m, dd) * (lambda + c * std::sqrt(M * (1.0 + M)));
  };
  static const std::vector<double> grid = [] {
    auto g = numeric::linspace(0.0, 1.0, 5000);
    for (double s : numeric::logspace(1e-12, 0.5, 5000)) g.push_back(1.0 - s);
    numeric::sort_unique(g);
    return g;
  }();
  auto best = numeric::grid_then_golden_max(value, grid, 1e-12);
  double m = best.x;
  double beta = std::sqrt(1.0 + m * m / ((1.0 - m * m) * (dd - 1.0)));
  return {best.value, m, beta};
}

struct SphericalUpperBound {
  double lambda = 0.0;
  double mu_d = 0.0;
  double m_star = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // |L_d(lambda) - mu_d|
};

/// Lambda*: the lambda at which L_d(lambda) reaches mu_d.
inline SphericalUpperBound upper_bound_spherical(int d) {
  const double mu = injective_norm_mu(d).mu;
  auto f = [&](double lambda) { return spiked_norm_lower_Ld(d, lambda).L - mu; };
  auto root = numeric::bisect(f, 0.0, mu, 1e-12);
  auto at = spiked_norm_lower_Ld(d, root.x);
  return {root.x, mu, at.m_star, at.beta, std::abs(at.L - mu)};
}

/// 2 sqrt(c) with c = lim (1/n) log |supp|.
inline double upper_bound_cardinality(const SpikePrior& prior, int /*d*/) {
  auto c = prior.support_log_density();
  if (!c) throw std::domain_error("upper_bound_cardinality: prior has no finite support");
  return 2.0 * std::sqrt(*c);
}

/// 2 sqrt(s) with s the Shannon entropy density. The priors here are uniform
/// on their support, so s equals the cardinality density.
inline double upper_bound_entropy(const SpikePrior& prior, int d) {
  if (!prior.is_discrete()) throw std::domain_error("upper_bound_entropy: prior must be discrete");
  return upper_bound_cardinality(prior, d);
}

enum class AsymptoticKind { mu_sq, lower_sph_sq, upper_sph_sq, sparse_rho_lower };

/// Leading asymptotic expressions with the vanishing corrections dropped.
/// The first three take d and return a squared threshold; sparse_rho_lower
/// takes rho and returns 2 sqrt(-rho log rho).
inline double asymptotic(AsymptoticKind kind, double d_or_rho) {
  const double x = d_or_rho;
  switch (kind) {
    case AsymptoticKind::mu_sq:
    case AsymptoticKind::lower_sph_sq:
    case AsymptoticKind::upper_sph_sq: {
      if (!(x >= 3.0)) throw std::domain_error("asymptotic: d must be >= 3");
      double base = 2.0 * std::log(x) + 2.0 * std::log(std::log(x));
      if (kind == AsymptoticKind::mu_sq) return base + 2.0;
      if (kind == AsymptoticKind::lower_sph_sq) return base + 2.0 - 4.0 * std::numbers::ln2;
      return base;
    }
    case AsymptoticKind::sparse_rho_lower:
      if (!(x > 0.0 && x < 1.0)) throw std::domain_error("asymptotic: rho must lie in (0, 1)");
      return 2.0 * std::sqrt(-x * std::log(x));
  }
  throw std::logic_error("asymptotic: unknown kind");
}

}  // namespace spiked
