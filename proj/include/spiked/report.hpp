#pragma once

// Per-(prior, d) aggregation of all threshold quantities.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "spiked/prior.hpp"
#include "spiked/rate_functions.hpp"
#include "spiked/replica.hpp"
#include "spiked/thresholds.hpp"

namespace spiked {

struct ThresholdDiagnostics {
  double t_star = 0.0;                    // minimizer in the lower-bound problem
  std::optional<double> tangency_t;       // spherical, d >= 3
  std::optional<double> tangency_lambda;  // spherical, d >= 3
  std::optional<double> m_star;           // spherical upper bound, d >= 3
  std::optional<double> beta;
  std::optional<double> mu_residual;
  std::optional<double> upper_residual;
  double generic_lambda_lower = 0.0;  // generic lambda*, uncapped
  bool capped_by_sigma = false;
  double sigma2 = 1.0;
  bool sigma2_is_curvature_estimate = false;
  std::optional<double> replica_lambda1;
};

struct ThresholdReport {
  SpikePrior prior = SpikePrior::spherical();
  int d = 0;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  std::optional<double> mu_d;
  std::optional<double> replica_prediction;
  std::optional<double> asymptotic_lower;  // thresholds, not squares
  std::optional<double> asymptotic_upper;
  std::optional<double> asymptotic_mu;
  ThresholdDiagnostics diagnostics;
};

/// Fills every field that applies to (prior, d). For d = 2 with the spherical
/// or Rademacher prior both bounds are the exact value 1 and the generic
/// lambda* is kept in the diagnostics. The replica prediction is computed only
/// on request (Rademacher and spherical, d >= 3).
inline ThresholdReport threshold_report(const SpikePrior& prior, int d, bool with_replica = false) {
  if (d < 2) throw std::domain_error("threshold_report: d must be >= 2");
  ThresholdReport r;
  r.prior = prior;
  r.d = d;
  RateFunction rate(prior);
  auto lower = lower_bound_lambda(rate, d);
  r.lambda_lower = lower.lambda;
  r.diagnostics.t_star = lower.t_star;
  r.diagnostics.generic_lambda_lower = lower.uncapped_lambda;
  r.diagnostics.capped_by_sigma = lower.capped;
  r.diagnostics.sigma2 = rate.local_subgaussian_sigma2();
  r.diagnostics.sigma2_is_curvature_estimate = rate.sigma2_is_curvature_estimate();

  if (d >= 3) {
    auto mu = injective_norm_mu(d);
    r.mu_d = mu.mu;
    r.diagnostics.mu_residual = mu.residual;
    r.asymptotic_mu = std::sqrt(asymptotic(AsymptoticKind::mu_sq, d));
  }

  switch (prior.kind()) {
    case PriorKind::spherical:
      if (d == 2) {
        r.lambda_lower = r.lambda_upper = 1.0;
        break;
      }
      {
        auto tan = spherical_tangency(d);
        r.diagnostics.tangency_t = tan.t_star;
        r.diagnostics.tangency_lambda = tan.lambda;
        auto up = upper_bound_spherical(d);
        r.lambda_upper = up.lambda;
        r.diagnostics.m_star = up.m_star;
        r.diagnostics.beta = up.beta;
        r.diagnostics.upper_residual = up.residual;
        r.asymptotic_lower = std::sqrt(asymptotic(AsymptoticKind::lower_sph_sq, d));
        r.asymptotic_upper = std::sqrt(asymptotic(AsymptoticKind::upper_sph_sq, d));
        if (with_replica) {
          auto rep = spherical_replica_thresholds(d);
          r.replica_prediction = rep.lambda2;
          r.diagnostics.replica_lambda1 = rep.lambda1;
        }
      }
      break;
    case PriorKind::rademacher:
      if (d == 2) {
        r.lambda_lower = r.lambda_upper = 1.0;
        break;
      }
      r.lambda_upper = upper_bound_cardinality(prior, d);
      r.asymptotic_lower = r.asymptotic_upper = r.lambda_upper;
      if (with_replica) {
        auto rep = rademacher_replica_thresholds(d);
        r.replica_prediction = rep.lambda2;
        r.diagnostics.replica_lambda1 = rep.lambda1;
      }
      break;
    case PriorKind::sparse_rademacher: {
      r.lambda_upper = upper_bound_cardinality(prior, d);
      double rho = *prior.rho();
      if (rho < 1.0) r.asymptotic_lower = asymptotic(AsymptoticKind::sparse_rho_lower, rho);
      break;
    }
  }
  return r;
}

}  // namespace spiked
