#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "spiked/entropy.hpp"
#include "spiked/numeric.hpp"
#include "spiked/rate_functions.hpp"

using namespace spiked;

namespace {

const double kLn2 = std::numbers::ln2;

double rade_closed_form(double t) { return kLn2 - binary_entropy((1.0 + t) / 2.0); }

double g_entropy_form(double zeta, double rho) {
  return -multi_entropy({zeta, rho - zeta, rho - zeta, 1.0 - 2.0 * rho + zeta}) + 2.0 * binary_entropy(rho);
}

double sparse_objective(double zeta, double t, double rho) {
  return g_entropy_form(zeta, rho) + zeta * rade_closed_form(std::min(1.0, rho * t / zeta));
}

// Pr[<x, x'> >= t] for Rademacher vectors by enumerating sign patterns of x'
// relative to x = all ones.
double rademacher_tail_enumerated(int n, double t) {
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    int minus = std::popcount(mask);
    double overlap = static_cast<double>(n - 2 * minus) / n;
    if (overlap >= t - 1e-12) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(std::uint64_t{1} << n);
}

// Same for the sparse prior: x supported on the first k coordinates with
// positive signs, x' over every support and sign choice.
double sparse_tail_enumerated(int n, int k, double t) {
  std::uint64_t hits = 0, total = 0;
  for (std::uint32_t support = 0; support < (1u << n); ++support) {
    if (std::popcount(support) != k) continue;
    int common = std::popcount(support & ((1u << k) - 1u));
    for (std::uint32_t signs = 0; signs < (1u << k); ++signs) {
      ++total;
      // the first `common` sign bits are assigned to the shared coordinates
      int minus = std::popcount(signs & ((1u << common) - 1u));
      double overlap = static_cast<double>(common - 2 * minus) / k;
      if (overlap >= t - 1e-12) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

TEST(Entropy, BinaryEntropyValues) {
  EXPECT_NEAR(binary_entropy(0.5), kLn2, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(2.0 / 3.0), 0.636514, 1e-6);
  EXPECT_THROW(binary_entropy(-0.1), std::domain_error);
  EXPECT_THROW(binary_entropy(1.1), std::domain_error);
}

TEST(Entropy, MultiEntropyValues) {
  EXPECT_EQ(multi_entropy({1.0, 0.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(multi_entropy({0.25, 0.25, 0.25, 0.25}), std::log(4.0), 1e-15);
  const double r = 0.3;
  EXPECT_NEAR(multi_entropy({r * r, r - r * r, r - r * r, (1 - r) * (1 - r)}), 2.0 * binary_entropy(r), 1e-14);
  EXPECT_NEAR(2.0 * binary_entropy(r), -2.0 * (0.3 * std::log(0.3) + 0.7 * std::log(0.7)), 1e-15);
  EXPECT_NEAR(2.0 * binary_entropy(r), 1.2217286, 1e-7);
  EXPECT_THROW(multi_entropy({0.5, -0.1}), std::domain_error);
}

TEST(RateFunctions, SphericalValues) {
  EXPECT_EQ(rate_spherical(0.0), 0.0);
  EXPECT_NEAR(rate_spherical(0.5), 0.143841, 1e-6);
  // -1/2 log(2e-6 - 1e-12)
  EXPECT_NEAR(rate_spherical(1.0 - 1e-6), 6.5611811, 1e-6);
  EXPECT_THROW(rate_spherical(1.0), std::domain_error);
  EXPECT_THROW(rate_spherical(-0.1), std::domain_error);
  for (double t : numeric::linspace(0.0, 0.999, 57)) EXPECT_NEAR(rate_spherical(t), -0.5 * std::log(1.0 - t * t), 1e-13);
}

TEST(RateFunctions, RademacherValues) {
  EXPECT_EQ(rate_rademacher(0.0), 0.0);
  EXPECT_NEAR(rate_rademacher(1.0), kLn2, 1e-15);
  EXPECT_NEAR(rate_rademacher(0.5), 0.130812, 1e-6);
  EXPECT_THROW(rate_rademacher(1.01), std::domain_error);
  for (double t : numeric::linspace(0.0, 1.0, 101)) EXPECT_NEAR(rate_rademacher(t), rade_closed_form(t), 1e-14);
}

TEST(RateFunctions, RademacherSmallOverlapIsQuadratic) {
  for (double t : {1e-3, 1e-5, 1e-8}) EXPECT_NEAR(rate_rademacher(t) / (t * t / 2.0), 1.0, 1e-6);
}

TEST(EntropyTermG, MatchesEntropyForm) {
  for (double rho : {0.05, 0.3, 0.5, 2.0 / 3.0, 0.9}) {
    const double lo = std::max(0.0, 2.0 * rho - 1.0);
    for (double zeta : numeric::linspace(lo, rho, 41))
      EXPECT_NEAR(entropy_term_G(zeta, rho), g_entropy_form(zeta, rho), 1e-13) << rho << " " << zeta;
  }
}

TEST(EntropyTermG, Values) {
  for (double rho : {0.1, 0.3, 0.7}) EXPECT_NEAR(entropy_term_G(rho * rho, rho), 0.0, 1e-16);
  EXPECT_NEAR(entropy_term_G(0.3, 0.3), binary_entropy(0.3), 1e-12);
  EXPECT_NEAR(entropy_term_G(0.3, 0.3), 0.610864, 1e-6);
  EXPECT_GT(entropy_term_G(0.09 + 0.01, 0.3), 0.0);
  EXPECT_GT(entropy_term_G(0.09 - 0.01, 0.3), 0.0);
  EXPECT_THROW(entropy_term_G(0.31, 0.3), std::domain_error);
  EXPECT_THROW(entropy_term_G(0.1, 0.6), std::domain_error);  // below 2 rho - 1
  EXPECT_THROW(entropy_term_G(0.1, 0.0), std::domain_error);
}

TEST(SparseRate, ZeroAndOne) {
  for (double rho : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
    EXPECT_EQ(rate_sparse_rademacher(0.0, rho), 0.0);
    double expected = binary_entropy(rho) + rho * kLn2;
    EXPECT_NEAR(rate_sparse_rademacher(1.0, rho), expected, 1e-8) << rho;
  }
  EXPECT_NEAR(rate_sparse_rademacher(1.0, 2.0 / 3.0), std::log(3.0), 1e-8);
}

TEST(SparseRate, DenseReduction) {
  for (double t : numeric::linspace(0.0, 1.0, 201)) EXPECT_NEAR(rate_sparse_rademacher(t, 1.0), rate_rademacher(t), 1e-10);
}

TEST(SparseRate, MatchesBruteForceZetaGrid) {
  for (auto [t, rho] : {std::pair{0.4, 0.3}, std::pair{0.8, 0.1}, std::pair{0.2, 0.7}}) {
    const double lo = std::max({0.0, 2.0 * rho - 1.0, rho * t});
    double best = INFINITY;
    const int points = 1'000'000;
    for (int i = 0; i <= points; ++i) {
      double zeta = lo + (rho - lo) * i / points;
      if (zeta <= 0.0) continue;
      best = std::min(best, sparse_objective(zeta, t, rho));
    }
    auto v = sparse_rate_detail(t, rho);
    EXPECT_LE(v.value, best + 1e-12);
    EXPECT_NEAR(v.value, best, 1e-9);
    EXPECT_GE(v.zeta_star, lo);
    EXPECT_LE(v.zeta_star, rho);
  }
}

TEST(SparseRate, Domain) {
  EXPECT_THROW(rate_sparse_rademacher(0.5, 0.0), std::domain_error);
  EXPECT_THROW(rate_sparse_rademacher(1.5, 0.5), std::domain_error);
}

TEST(RateFunctions, MonotoneOnFineGrid) {
  auto grid = numeric::linspace(0.0, 1.0 - 1e-6, 10000);
  for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher(), SpikePrior::sparse(0.3)}) {
    RateFunction f(prior);
    EXPECT_EQ(f(0.0), 0.0);
    double prev = 0.0;
    for (double t : grid) {
      double v = f(t);
      EXPECT_GE(v, prev - 1e-13) << "t=" << t;
      prev = v;
    }
  }
}

TEST(RateFunctions, CollisionEntropy) {
  EXPECT_EQ(collision_entropy(SpikePrior::spherical()), INFINITY);
  EXPECT_NEAR(collision_entropy(SpikePrior::rademacher()), kLn2, 1e-15);
  EXPECT_NEAR(collision_entropy(SpikePrior::sparse(2.0 / 3.0)), std::log(3.0), 1e-12);
  EXPECT_NEAR(collision_entropy(SpikePrior::sparse(0.3)), RateFunction(SpikePrior::sparse(0.3))(1.0), 1e-8);
  EXPECT_FALSE(RateFunction(SpikePrior::spherical()).defined_at_one());
  EXPECT_TRUE(RateFunction(SpikePrior::rademacher()).defined_at_one());
}

TEST(RateFunctions, SubgaussianConstant) {
  EXPECT_EQ(RateFunction(SpikePrior::spherical()).local_subgaussian_sigma2(), 1.0);
  EXPECT_FALSE(RateFunction(SpikePrior::rademacher()).sigma2_is_curvature_estimate());
  // The overlap of two sparse spikes has variance exactly 1/n.
  for (double rho : {1e-4, 0.1, 0.5, 1.0}) {
    RateFunction f(SpikePrior::sparse(rho));
    EXPECT_TRUE(f.sigma2_is_curvature_estimate());
    EXPECT_NEAR(f.local_subgaussian_sigma2(), 1.0, 1e-6) << rho;
  }
}

TEST(ExactTail, HypergeometricPmf) {
  auto pmf = hypergeometric_overlap_pmf(4, 2);
  ASSERT_EQ(pmf.size(), 3u);
  EXPECT_NEAR(pmf[0], 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(pmf[1], 4.0 / 6.0, 1e-14);
  EXPECT_NEAR(pmf[2], 1.0 / 6.0, 1e-14);
  for (std::size_t n = 1; n <= 200; ++n)
    for (double rho : {0.1, 0.3, 0.5, 0.9}) {
      std::size_t k = SpikePrior::sparse(rho).support_size(n);
      auto p = hypergeometric_overlap_pmf(n, k);
      double s = 0.0;
      for (double v : p) s += v;
      EXPECT_NEAR(s, 1.0, 1e-12) << n << " " << rho;
    }
  EXPECT_THROW(hypergeometric_overlap_pmf(3, 4), std::domain_error);
}

TEST(ExactTail, RademacherTwoCoordinates) {
  // Overlap is 1 only when both signs agree: one pattern in four.
  EXPECT_NEAR(exact_overlap_tail(SpikePrior::rademacher(), 2, 0.9), 0.25, 1e-15);
  EXPECT_NEAR(exact_overlap_tail(SpikePrior::rademacher(), 2, 0.0), 0.75, 1e-15);
}

TEST(ExactTail, RademacherMatchesEnumeration) {
  for (int n : {1, 2, 5, 9, 16})
    for (double t : numeric::linspace(-1.0, 1.0, 23))
      EXPECT_NEAR(exact_overlap_tail(SpikePrior::rademacher(), n, t), rademacher_tail_enumerated(n, t), 1e-13)
          << n << " " << t;
}

TEST(ExactTail, SparseMatchesEnumeration) {
  for (auto [n, rho] : {std::pair{8, 0.5}, std::pair{10, 0.3}, std::pair{12, 0.25}}) {
    auto prior = SpikePrior::sparse(rho);
    int k = static_cast<int>(prior.support_size(n));
    for (double t : numeric::linspace(-1.0, 1.0, 17))
      EXPECT_NEAR(exact_overlap_tail(prior, n, t), sparse_tail_enumerated(n, k, t), 1e-13) << n << " " << t;
  }
}

TEST(ExactTail, SphericalMatchesIncompleteBeta) {
  for (std::size_t n : {3u, 5u, 20u, 100u, 400u})
    for (double t : {-0.6, -0.1, 0.05, 0.3, 0.5, 0.8}) {
      const double a = static_cast<double>(n) / 2.0;
      double expected = boost::math::ibeta(a, a, (1.0 - t) / 2.0);
      EXPECT_NEAR(exact_overlap_tail(SpikePrior::spherical(), n, t) / expected, 1.0, 1e-10) << n << " " << t;
    }
}

TEST(ExactTail, SphericalSmallN) {
  auto s = SpikePrior::spherical();
  EXPECT_NEAR(exact_overlap_tail(s, 2, 0.4), 0.3, 1e-15);
  EXPECT_NEAR(exact_overlap_tail(s, 1, 0.4), 0.5, 1e-15);
  EXPECT_EQ(exact_overlap_tail(s, 10, 1.0), 0.0);
  EXPECT_EQ(exact_overlap_tail(s, 10, -1.0), 1.0);
}

TEST(ExactTail, SymmetricAtZero) {
  for (auto prior : {SpikePrior::spherical(), SpikePrior::rademacher(), SpikePrior::sparse(0.3)})
    for (std::size_t n : {3u, 10u, 50u}) EXPECT_GE(exact_overlap_tail(prior, n, 0.0), 0.5 - 1e-12);
}

TEST(ExactTail, RademacherChernoffDomination) {
  auto grid = numeric::linspace(0.02, 1.0, 50);
  for (std::size_t n = 1; n <= 64; ++n)
    for (double t : grid) {
      double bound = -static_cast<double>(n) * rate_rademacher(t);
      EXPECT_LE(exact_overlap_log_tail(SpikePrior::rademacher(), n, t), bound + 1e-12) << n << " " << t;
    }
}

TEST(ExactTail, SparseFiniteRateConverges) {
  OverlapTailOracle oracle{SpikePrior::sparse(0.3), 200};
  EXPECT_EQ(oracle.method(), TailMethod::hypergeometric_compound);
  for (double t : {0.2, 0.4, 0.6}) EXPECT_NEAR(oracle.rate(t), rate_sparse_rademacher(t, 0.3), 0.05) << t;
}

TEST(ExactTail, SparsePolynomialPrefactorIsBounded) {
  const double rho = 0.3;
  auto prior = SpikePrior::sparse(rho);
  auto grid = numeric::linspace(0.1, 0.9, 9);
  auto log_ratio = [&](std::size_t n, double t) {
    double nn = static_cast<double>(n);
    return exact_overlap_log_tail(prior, n, t) + nn * rate_sparse_rademacher(t, rho) - 1.5 * std::log(nn);
  };
  double log_c = -INFINITY;
  for (std::size_t n = 10; n <= 100; n += 10)
    for (double t : grid) log_c = std::max(log_c, log_ratio(n, t));
  for (std::size_t n = 110; n <= 200; n += 10)
    for (double t : grid) EXPECT_LE(log_ratio(n, t), log_c + 1e-9) << n << " " << t;
}

TEST(ExactTail, CapacityAndOracle) {
  EXPECT_THROW(exact_overlap_tail(SpikePrior::rademacher(), 201, 0.5), CapacityError);
  EXPECT_THROW(exact_overlap_tail(SpikePrior::sparse(0.5), 201, 0.5), CapacityError);
  EXPECT_NO_THROW(exact_overlap_tail(SpikePrior::spherical(), 5000, 0.5));
  OverlapTailOracle rade{SpikePrior::rademacher(), 30};
  EXPECT_EQ(rade.method(), TailMethod::binomial);
  EXPECT_EQ((OverlapTailOracle{SpikePrior::spherical(), 30}.method()), TailMethod::incomplete_beta);
  double prev = 1.0;
  for (double t : numeric::linspace(-1.0, 1.0, 61)) {
    double p = rade(t);
    EXPECT_LE(p, prev + 1e-15);
    prev = p;
  }
}

TEST(ExactTail, FiniteRateApproachesLimit) {
  OverlapTailOracle sph{SpikePrior::spherical(), 4000};
  OverlapTailOracle rade{SpikePrior::rademacher(), 200};
  for (double t : {0.2, 0.5}) {
    EXPECT_NEAR(sph.rate(t), rate_spherical(t), 0.005);
    EXPECT_NEAR(rade.rate(t), rate_rademacher(t), 0.03);
  }
}
