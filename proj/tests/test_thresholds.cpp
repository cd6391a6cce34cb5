#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "spiked/report.hpp"
#include "spiked/thresholds.hpp"

using namespace spiked;

namespace {

const double kTwoSqrtLn2 = 2.0 * std::sqrt(std::numbers::ln2);

// mu_d from the unrationalized z(x), solved with TOMS 748.
double mu_oracle(int d) {
  const double dd = d;
  auto g = [dd](double x) {
    double z = (x - std::sqrt(x * x - 4.0 * (dd - 1.0))) / ((dd - 1.0) * std::sqrt(2.0 * dd));
    return (2.0 - dd) / dd - std::log(dd * z * z / 2.0) + (dd - 1.0) * z * z / 2.0 - 2.0 / (dd * dd * z * z);
  };
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, 2.0 * std::sqrt(dd - 1.0) + 1e-12, 4.0 * std::sqrt(dd * std::log(dd) + dd),
                                             boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second) * std::sqrt(2.0 / dd);
}

double lower_ratio(const RateFunction& f, int d, double t) { return f(t) * (1.0 + std::pow(t, -d)); }

}  // namespace

TEST(InjectiveNorm, ThreeDimensionalValue) {
  auto mu = injective_norm_mu(3);
  EXPECT_NEAR(mu.mu, 2.3433, 5e-4);
  EXPECT_LT(mu.residual, 1e-9);
}

TEST(InjectiveNorm, MatchesIndependentSolver) {
  for (int d : {3, 4, 7, 12, 50, 400}) EXPECT_NEAR(injective_norm_mu(d).mu, mu_oracle(d), 1e-8) << d;
}

TEST(InjectiveNorm, IncreasingInD) {
  double prev = 0.0;
  for (int d = 3; d <= 50; ++d) {
    double mu = injective_norm_mu(d).mu;
    EXPECT_GT(mu, prev) << d;
    prev = mu;
  }
  EXPECT_THROW(injective_norm_mu(2), std::domain_error);
}

TEST(LowerBound, TangencyAgreesWithGenericSolver) {
  RateFunction sph(SpikePrior::spherical());
  for (int d = 3; d <= 30; ++d) {
    auto generic = lower_bound_lambda(sph, d);
    auto tan = spherical_tangency(d);
    EXPECT_NEAR(generic.lambda, tan.lambda, 1e-6) << d;
    EXPECT_NEAR(generic.t_star, tan.t_star, 1e-4) << d;
  }
}

TEST(LowerBound, TangencyPointApproachesOne) {
  auto tan = spherical_tangency(100);
  EXPECT_GT(tan.t_star, 0.99);
  EXPECT_LT(tan.t_star, 1.0);
  EXPECT_THROW(spherical_tangency(2), std::domain_error);
}

TEST(LowerBound, MatchesBruteForceGrid) {
  for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher()}) {
    RateFunction f(prior);
    for (int d : {3, 6}) {
      double best = INFINITY;
      const int points = 1'000'000;
      for (int i = 1; i < points; ++i) best = std::min(best, lower_ratio(f, d, static_cast<double>(i) / points));
      if (f.defined_at_one()) best = std::min(best, lower_ratio(f, d, 1.0));
      auto lb = lower_bound_lambda(f, d);
      EXPECT_LE(lb.ratio, best + 1e-12);
      EXPECT_NEAR(std::sqrt(2.0 * best), lb.lambda, 1e-6);
    }
  }
}

TEST(LowerBound, RademacherLargeD) {
  RateFunction f(SpikePrior::rademacher());
  EXPECT_NEAR(lower_bound_lambda(f, 200).lambda / kTwoSqrtLn2, 1.0, 0.005);
  EXPECT_NEAR(lower_bound_lambda(f, 50).lambda / kTwoSqrtLn2, 1.0, 0.02);
}

TEST(LowerBound, RademacherNondecreasingInD) {
  RateFunction f(SpikePrior::rademacher());
  double prev = 0.0;
  for (int d = 3; d <= 50; ++d) {
    double v = lower_bound_lambda(f, d).lambda;
    EXPECT_GE(v, prev - 1e-9) << d;
    prev = v;
  }
}

TEST(LowerBound, CollisionEntropyCap) {
  for (auto prior : {SpikePrior::rademacher(), SpikePrior::sparse(0.3), SpikePrior::sparse(2.0 / 3.0)}) {
    RateFunction f(prior);
    for (int d : {3, 5, 20}) {
      double l = lower_bound_lambda(f, d).lambda;
      EXPECT_LE(l * l, 4.0 * f.collision_entropy() + 1e-9);
    }
  }
}

TEST(LowerBound, SparseSandwich) {
  const double rho = 0.1;
  auto prior = SpikePrior::sparse(rho);
  auto lb = lower_bound_lambda(RateFunction(prior), 2);
  EXPECT_LT(lb.lambda, upper_bound_cardinality(prior, 2));
  EXPECT_GT(lb.lambda, asymptotic(AsymptoticKind::sparse_rho_lower, rho));
}

TEST(LowerBound, SparseSmallRhoAsymptote) {
  const double rho = 1e-4;
  auto lb = lower_bound_lambda(RateFunction(SpikePrior::sparse(rho)), 2);
  double ratio = lb.lambda / asymptotic(AsymptoticKind::sparse_rho_lower, rho);
  EXPECT_GE(ratio, 0.8);
  EXPECT_LE(ratio, 1.1);
}

TEST(LowerBound, OrderTwoIsCapped) {
  // (1 + t^2)/t^2 f(t) -> 1/2 as t -> 0 for a unit-variance overlap, so lambda* <= 1.
  for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher()}) {
    auto lb = lower_bound_lambda(RateFunction(prior), 2);
    EXPECT_LE(lb.lambda, 1.0);
    EXPECT_NEAR(lb.lambda, 1.0, 1e-3);
  }
}

TEST(SpikedNorm, EndpointAndStrictGain) {
  for (int d : {3, 5, 10})
    for (double lambda : {0.0, 0.5, 1.5, 3.0}) {
      auto b = spiked_norm_lower_Ld(d, lambda);
      EXPECT_GE(b.L, lambda);
      if (lambda > 0.0) {
        EXPECT_GT(b.L, lambda);
      }
      EXPECT_GT(b.m_star, 0.0);
      EXPECT_LT(b.m_star, 1.0);
      EXPECT_GE(b.beta, 1.0);
    }
  EXPECT_THROW(spiked_norm_lower_Ld(3, -1.0), std::domain_error);
}

TEST(SpikedNorm, IncreasingInLambda) {
  double prev = -1.0;
  for (double lambda = 0.0; lambda <= 4.0; lambda += 0.25) {
    double v = spiked_norm_lower_Ld(4, lambda).L;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(SpikedNorm, MatchesBruteForceGrid) {
  const double d = 3.0;
  const double c = std::sqrt(2.0 * d / (d - 1.0));
  double best = 0.0;
  const int points = 1'000'000;
  for (int i = 1; i < points; ++i) {
    double m = static_cast<double>(i) / points;
    double M = (d - 1.0) * (1.0 - m * m) / (m * m);
    best = std::max(best, m * m * m * c * std::sqrt(M * (1.0 + M)));
  }
  auto b = spiked_norm_lower_Ld(3, 0.0);
  EXPECT_GE(b.L, best - 1e-12);
  EXPECT_NEAR(b.L, best, 1e-8);
}

TEST(UpperBound, SphericalOrderingAndResidual) {
  RateFunction sph(SpikePrior::spherical());
  for (int d = 3; d <= 30; ++d) {
    auto up = upper_bound_spherical(d);
    EXPECT_LT(up.residual, 1e-8) << d;
    EXPECT_LT(up.lambda, up.mu_d) << d;
    EXPECT_GT(up.lambda, lower_bound_lambda(sph, d).lambda) << d;
  }
}

TEST(UpperBound, DiscretePriors) {
  EXPECT_NEAR(upper_bound_cardinality(SpikePrior::rademacher(), 3), 1.665109, 1e-6);
  EXPECT_NEAR(upper_bound_cardinality(SpikePrior::sparse(2.0 / 3.0), 3), 2.0 * std::sqrt(std::log(3.0)), 1e-12);
  EXPECT_NEAR(upper_bound_cardinality(SpikePrior::sparse(1.0), 3), kTwoSqrtLn2, 1e-12);
  EXPECT_NEAR(upper_bound_entropy(SpikePrior::sparse(0.1), 3),
              2.0 * std::sqrt(binary_entropy(0.1) + 0.1 * std::numbers::ln2), 1e-12);
  EXPECT_EQ(upper_bound_entropy(SpikePrior::rademacher(), 4), upper_bound_cardinality(SpikePrior::rademacher(), 4));
  EXPECT_THROW(upper_bound_cardinality(SpikePrior::spherical(), 3), std::domain_error);
  EXPECT_THROW(upper_bound_entropy(SpikePrior::spherical(), 3), std::domain_error);
}

TEST(Asymptotics, Expressions) {
  const double d = 1000.0;
  double base = 2.0 * std::log(d) + 2.0 * std::log(std::log(d));
  EXPECT_DOUBLE_EQ(asymptotic(AsymptoticKind::upper_sph_sq, d), base);
  EXPECT_DOUBLE_EQ(asymptotic(AsymptoticKind::mu_sq, d), base + 2.0);
  EXPECT_DOUBLE_EQ(asymptotic(AsymptoticKind::lower_sph_sq, d), base + 2.0 - 4.0 * std::numbers::ln2);
  EXPECT_DOUBLE_EQ(asymptotic(AsymptoticKind::sparse_rho_lower, 0.01), 2.0 * std::sqrt(-0.01 * std::log(0.01)));
  EXPECT_THROW(asymptotic(AsymptoticKind::mu_sq, 2.0), std::domain_error);
  EXPECT_THROW(asymptotic(AsymptoticKind::sparse_rho_lower, 1.0), std::domain_error);
}

// The o(1) corrections decay like log log d / log d, so only the trend is
// checked here; the absolute targets live in the acceptance binary.
TEST(Asymptotics, GapsShrinkWithD) {
  double prev_lo = INFINITY, prev_mu = INFINITY, prev_up = INFINITY;
  for (int d : {10, 100, 1000, 3000}) {
    double lo = std::pow(spherical_tangency(d).lambda, 2) - asymptotic(AsymptoticKind::lower_sph_sq, d);
    double mu = std::pow(injective_norm_mu(d).mu, 2) - asymptotic(AsymptoticKind::mu_sq, d);
    double up = std::pow(upper_bound_spherical(d).lambda, 2) - asymptotic(AsymptoticKind::upper_sph_sq, d);
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(lo, prev_lo) << d;
    EXPECT_LT(mu, prev_mu) << d;
    EXPECT_LT(up, prev_up) << d;
    EXPECT_LT(up, 0.7);
    prev_lo = lo;
    prev_mu = mu;
    prev_up = up;
  }
  double lo = std::pow(spherical_tangency(10000).lambda, 2) - asymptotic(AsymptoticKind::lower_sph_sq, 10000);
  EXPECT_LT(lo, prev_lo);
}

TEST(Report, SphericalFields) {
  auto r = threshold_report(SpikePrior::spherical(), 5);
  ASSERT_TRUE(r.mu_d);
  EXPECT_LT(r.lambda_lower, r.lambda_upper);
  EXPECT_LT(r.lambda_upper, *r.mu_d);
  EXPECT_TRUE(std::isfinite(r.lambda_lower));
  ASSERT_TRUE(r.diagnostics.tangency_lambda);
  EXPECT_NEAR(*r.diagnostics.tangency_lambda, r.lambda_lower, 1e-6);
  EXPECT_FALSE(r.replica_prediction);
}

TEST(Report, OrderTwoExact) {
  for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher()}) {
    auto r = threshold_report(prior, 2);
    EXPECT_EQ(r.lambda_lower, 1.0);
    EXPECT_EQ(r.lambda_upper, 1.0);
    EXPECT_FALSE(r.mu_d);
  }
  EXPECT_THROW(threshold_report(SpikePrior::rademacher(), 1), std::domain_error);
}

TEST(Report, SparseFields) {
  auto prior = SpikePrior::sparse(0.1);
  auto r = threshold_report(prior, 3);
  EXPECT_EQ(r.lambda_upper, upper_bound_cardinality(prior, 3));
  ASSERT_TRUE(r.mu_d);
  EXPECT_NEAR(*r.mu_d, injective_norm_mu(3).mu, 1e-15);
  EXPECT_TRUE(r.diagnostics.sigma2_is_curvature_estimate);
  ASSERT_TRUE(r.asymptotic_lower);
}

TEST(Report, Bracketing) {
  for (int d = 3; d <= 30; ++d) {
    for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher()}) {
      auto r = threshold_report(prior, d);
      EXPECT_LE(r.lambda_lower, r.lambda_upper) << d;
    }
  }
  for (int d : {3, 10, 30}) {
    auto r = threshold_report(SpikePrior::sparse(0.3), d);
    EXPECT_LE(r.lambda_lower, r.lambda_upper) << d;
  }
}

TEST(Report, ReplicaInsideBracket) {
  for (int d : {3, 4, 6, 10}) {
    for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher()}) {
      auto r = threshold_report(prior, d, true);
      ASSERT_TRUE(r.replica_prediction);
      EXPECT_GE(*r.replica_prediction, r.lambda_lower) << d;
      EXPECT_LE(*r.replica_prediction, r.lambda_upper) << d;
    }
  }
}
