#pragma once

// Replica-symmetric fixed points and free energies for the Rademacher and
// spherical priors, and the thresholds they predict.
//
// Rademacher: mu = (lambda^2/2) d q^{d-1},  q = E tanh(mu + sqrt(mu) z).
// Spherical:  (lambda^2/2) d q^{d-1} (1 - q) = q.
// lambda1 is where nonzero solutions first appear; lambda2 is where the
// high-overlap branch's free energy drops below the zero solution's.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiked/errors.hpp"
#include "spiked/numeric.hpp"
#include "spiked/quadrature.hpp"

namespace spiked {

enum class Branch { zero, low, high };

inline std::string branch_name(Branch b) {
  switch (b) {
    case Branch::zero: return "zero";
    case Branch::low: return "low";
    case Branch::high: return "high";
  }
  return "unknown";
}

struct ReplicaSolution {
  int d = 0;
  double lambda = 0.0;
  Branch branch = Branch::zero;
  double q = 0.0;
  double mu = 0.0;
  double free_energy = 0.0;
  double residual = 0.0;  // |mu - (lambda^2/2) d q^{d-1}|
};

struct SphericalSolution {
  int d = 0;
  double lambda = 0.0;
  Branch branch = Branch::zero;
  double q = 0.0;
  double free_energy = 0.0;
  double residual = 0.0;  // |(lambda^2/2) d q^{d-1}(1 - q) - q|
};

struct ReplicaThresholds {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double peak = 0.0;  // mu (Rademacher) or q (spherical) where nonzero solutions appear
};

// ---------------------------------------------------------------------------
// Rademacher
// ---------------------------------------------------------------------------

struct TanhMoments {
  double tanh1 = 0.0;  // E tanh(mu + sqrt(mu) z)
  double tanh2 = 0.0;  // E tanh^2(mu + sqrt(mu) z)
};

inline TanhMoments tanh_moments(double mu, const GaussQuadrature& quad = default_quadrature()) {
  if (!(mu >= 0.0)) throw std::domain_error("tanh_moments: mu must be >= 0");
  if (mu == 0.0) return {};
  const double s = std::sqrt(mu);
  TanhMoments m;
  const auto& z = quad.nodes();
  const auto& w = quad.weights();
  for (std::size_t i = 0; i < z.size(); ++i) {
    double th = std::tanh(mu + s * z[i]);
    m.tanh1 += w[i] * th;
    m.tanh2 += w[i] * th * th;
  }
  return m;
}

inline double q_of_mu_rademacher(double mu, const GaussQuadrature& quad = default_quadrature()) {
  if (!(mu >= 0.0)) throw std::domain_error("q_of_mu_rademacher: mu must be >= 0");
  if (mu == 0.0) return 0.0;
  const double s = std::sqrt(mu);
  return quad.expect([&](double z) { return std::tanh(mu + s * z); });
}

/// E log(2 cosh(mu + sqrt(mu) z)).
inline double log_two_cosh_mean(double mu, const GaussQuadrature& quad = default_quadrature()) {
  if (mu == 0.0) return std::numbers::ln2;
  const double s = std::sqrt(mu);
  return quad.expect([&](double z) {
    double y = std::abs(mu + s * z);
    return y + std::log1p(std::exp(-2.0 * y));
  });
}

inline double rademacher_free_energy(int d, double lambda, double q, double mu,
                                     const GaussQuadrature& quad = default_quadrature()) {
  if (!(lambda > 0.0)) throw std::domain_error("rademacher_free_energy: lambda must be > 0");
  const double l2 = lambda * lambda;
  return (-(l2 / 4.0) * (std::pow(q, d) + 1.0) + (mu / 2.0) * (q + 1.0) - log_two_cosh_mean(mu, quad)) /
         lambda;
}

struct PhiPeak {
  double mu = 0.0;
  double value = 0.0;
};

/// Maximum of phi(mu) = d q(mu)^{d-1} / mu. Nonzero fixed points exist
/// exactly when 2/lambda^2 <= max phi. For d = 2 phi decreases from its
/// mu -> 0 limit of 2, and the peak sits at the bottom of the search range.
inline PhiPeak rademacher_phi_peak(int d, const GaussQuadrature& quad = default_quadrature()) {
  if (d < 2) throw std::domain_error("rademacher_phi_peak: d must be >= 2");
  auto phi_log = [&](double log_mu) {
    double mu = std::exp(log_mu);
    return d * std::pow(q_of_mu_rademacher(mu, quad), d - 1) / mu;
  };
  auto grid = numeric::linspace(std::log(1e-6), std::log(10.0 * d + 50.0), 2000);
  auto best = numeric::grid_then_golden_max(phi_log, grid, 1e-12);
  return {std::exp(best.x), best.value};
}

namespace detail {

inline ReplicaSolution rademacher_solution(int d, double lambda, double mu, Branch branch,
                                           const GaussQuadrature& quad) {
  double q = q_of_mu_rademacher(mu, quad);
  double target = lambda * lambda / 2.0 * d * std::pow(q, d - 1);
  return {d, lambda, branch, q, mu, rademacher_free_energy(d, lambda, q, mu, quad), std::abs(mu - target)};
}

inline double rademacher_gap(int d, double lambda, double mu, const GaussQuadrature& quad) {
  return d * std::pow(q_of_mu_rademacher(mu, quad), d - 1) - 2.0 * mu / (lambda * lambda);
}

inline ReplicaSolution zero_rademacher(int d, double lambda, const GaussQuadrature& quad) {
  return {d, lambda, Branch::zero, 0.0, 0.0, rademacher_free_energy(d, lambda, 0.0, 0.0, quad), 0.0};
}

}  // namespace detail

/// All replica-symmetric solutions at (d, lambda), zero branch first.
///
/// Nonzero solutions are sign changes of d q(mu)^{d-1} - 2 mu/lambda^2 on
/// 2000 log-spaced points of [1e-8, 10 d lambda^2] (plus the peak of phi),
/// polished by bisection. Solutions below the peak are labelled low, above it
/// high; for d = 2 the single nonzero solution is labelled high.
inline std::vector<ReplicaSolution> rademacher_fixed_points(int d, double lambda,
                                                            const GaussQuadrature& quad = default_quadrature()) {
  if (d < 2) throw std::domain_error("rademacher_fixed_points: d must be >= 2");
  if (!(lambda > 0.0)) throw std::domain_error("rademacher_fixed_points: lambda must be > 0");
  std::vector<ReplicaSolution> out{detail::zero_rademacher(d, lambda, quad)};
  const double peak = d == 2 ? 0.0 : rademacher_phi_peak(d, quad).mu;
  auto grid = numeric::logspace(1e-8, 10.0 * d * lambda * lambda, 2000);
  if (peak > 0.0) grid.push_back(peak);
  numeric::sort_unique(grid);
  auto gap = [&](double mu) { return detail::rademacher_gap(d, lambda, mu, quad); };
  double prev = gap(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double cur = gap(grid[i]);
    if (cur == 0.0 || (prev < 0.0) != (cur < 0.0)) {
      auto root = numeric::bisect(gap, grid[i - 1], grid[i], 1e-15 * grid[i], 400, true);
      Branch b = (d == 2 || root.x >= peak) ? Branch::high : Branch::low;
      out.push_back(detail::rademacher_solution(d, lambda, root.x, b, quad));
    }
    prev = cur;
  }
  return out;
}

/// High branch at (d, lambda), or nothing below the appearance point.
inline std::optional<ReplicaSolution> rademacher_high_branch(int d, double lambda, const PhiPeak& peak,
                                                              const GaussQuadrature& quad = default_quadrature()) {
  if (2.0 / (lambda * lambda) > peak.value) return std::nullopt;
  auto gap = [&](double mu) { return detail::rademacher_gap(d, lambda, mu, quad); };
  double hi = d * lambda * lambda / 2.0;
  double lo = std::min(peak.mu, hi);
  if (gap(lo) < 0.0) return std::nullopt;
  auto root = numeric::bisect(gap, lo, hi, 1e-15 * hi);
  return detail::rademacher_solution(d, lambda, root.x, Branch::high, quad);
}

/// Smallest lambda on [lo, hi] at which the fixed-point scan finds a nonzero
/// solution, by bisection on existence.
inline double rademacher_appearance_lambda(int d, double lo, double hi, double tol = 1e-6,
                                           const GaussQuadrature& quad = default_quadrature()) {
  auto exists = [&](double lambda) { return rademacher_fixed_points(d, lambda, quad).size() > 1; };
  if (exists(lo) || !exists(hi)) {
    throw SolverError("rademacher_appearance_lambda: existence does not switch on [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (exists(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

template <class Gap>
double free_energy_crossing(double lambda1, Gap&& delta, const char* who) {
  double lo = lambda1;
  double hi = lambda1 * 1.25;
  int steps = 0;
  while (delta(hi) >= 0.0) {
    lo = hi;
    hi *= 1.25;
    if (++steps > 60)
      throw SolverError(std::string(who) + ": free-energy difference keeps its sign up to lambda = " +
                        std::to_string(hi));
  }
  if (delta(lo) < 0.0)
    throw SolverError(std::string(who) + ": high branch already below zero branch at lambda1 = " +
                      std::to_string(lo));
  return numeric::bisect(delta, lo, hi, 1e-10).x;
}

}  // namespace detail

inline ReplicaThresholds rademacher_replica_thresholds(int d, const GaussQuadrature& quad = default_quadrature()) {
  if (d < 3) throw std::domain_error("rademacher_replica_thresholds: d must be >= 3");
  const PhiPeak peak = rademacher_phi_peak(d, quad);
  const double lambda1 = std::sqrt(2.0 / peak.value);
  auto delta = [&](double lambda) {
    auto high = rademacher_high_branch(d, lambda, peak, quad);
    if (!high) return 1.0;
    return high->free_energy - rademacher_free_energy(d, lambda, 0.0, 0.0, quad);
  };
  // nudge above lambda1 so the high branch exists despite rounding
  double lambda2 = detail::free_energy_crossing(lambda1 * (1.0 + 1e-12), delta, "rademacher_replica_thresholds");
  return {lambda1, lambda2, peak.mu};
}

// ---------------------------------------------------------------------------
// Spherical
// ---------------------------------------------------------------------------

inline double spherical_free_energy(double lambda, double q, int d) {
  if (!(lambda > 0.0)) throw std::domain_error("spherical_free_energy: lambda must be > 0");
  if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("spherical_free_energy: q must lie in [0, 1)");
  const double l2 = lambda * lambda;
  return (-(l2 / 4.0) * (std::pow(q, d) + 1.0) - q / 2.0 - 0.5 * std::log1p(-q)) / lambda;
}

namespace detail {

// psi(q) = d q^{d-2} (1 - q); nonzero solutions satisfy psi(q) = 2/lambda^2
inline double spherical_peak_q(int d) { return d == 2 ? 0.0 : (d - 2.0) / (d - 1.0); }

inline double spherical_psi_max(int d) {
  double q = spherical_peak_q(d);
  return d == 2 ? 2.0 : d * std::pow(q, d - 2) * (1.0 - q);
}

inline SphericalSolution spherical_solution(int d, double lambda, double q, Branch b) {
  double lhs = lambda * lambda / 2.0 * d * std::pow(q, d - 1) * (1.0 - q);
  return {d, lambda, b, q, spherical_free_energy(lambda, q, d), std::abs(lhs - q)};
}

inline std::optional<SphericalSolution> spherical_high(int d, double lambda) {
  const double target = 2.0 / (lambda * lambda);
  if (target > spherical_psi_max(d)) return std::nullopt;
  // solve in s = 1 - q to keep precision as q -> 1
  auto f = [&](double s) { return d * std::exp((d - 2.0) * std::log1p(-s)) * s - target; };
  double s_hi = 1.0 - spherical_peak_q(d);
  if (f(s_hi) < 0.0) return std::nullopt;
  auto root = numeric::bisect(f, 1e-300, s_hi, 0.0, 2000, true);
  return spherical_solution(d, lambda, 1.0 - root.x, Branch::high);
}

}  // namespace detail

/// All stationary points at (d, lambda), zero branch first. For d >= 3 the
/// nonzero solutions lie on either side of q_m = (d-2)/(d-1), where
/// d q^{d-2}(1 - q) peaks; for d = 2 there is at most one (q = 1 - 1/lambda^2).
inline std::vector<SphericalSolution> spherical_fixed_points(int d, double lambda) {
  if (d < 2) throw std::domain_error("spherical_fixed_points: d must be >= 2");
  if (!(lambda > 0.0)) throw std::domain_error("spherical_fixed_points: lambda must be > 0");
  std::vector<SphericalSolution> out{{d, lambda, Branch::zero, 0.0, spherical_free_energy(lambda, 0.0, d), 0.0}};
  const double target = 2.0 / (lambda * lambda);
  if (target > detail::spherical_psi_max(d)) return out;
  if (d >= 3) {
    const double qm = detail::spherical_peak_q(d);
    auto psi = [&](double q) { return d * std::pow(q, d - 2) * (1.0 - q) - target; };
    auto low = numeric::bisect(psi, 0.0, qm, 0.0, 2000);
    out.push_back(detail::spherical_solution(d, lambda, low.x, Branch::low));
  }
  if (auto high = detail::spherical_high(d, lambda)) {
    if (d == 2 && high->q == 0.0) return out;
    out.push_back(*high);
  }
  return out;
}

inline ReplicaThresholds spherical_replica_thresholds(int d) {
  if (d < 3) throw std::domain_error("spherical_replica_thresholds: d must be >= 3");
  const double lambda1 = std::sqrt(2.0 / detail::spherical_psi_max(d));
  auto delta = [&](double lambda) {
    auto high = detail::spherical_high(d, lambda);
    if (!high) return 1.0;
    return high->free_energy - spherical_free_energy(lambda, 0.0, d);
  };
  double lambda2 = detail::free_energy_crossing(lambda1 * (1.0 + 1e-12), delta, "spherical_replica_thresholds");
  return {lambda1, lambda2, detail::spherical_peak_q(d)};
}

inline double spherical_replica_threshold(int d) { return spherical_replica_thresholds(d).lambda2; }

}  // namespace spiked
