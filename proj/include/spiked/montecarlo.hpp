#pragma once

// Seeded desk-scale simulations: exhaustive MLE/MAP statistics, tensor power
// iteration, paired detection and recovery experiments, empirical overlap
// tails, and the matrix (d = 2) spectral reference run.
//
// Trial k draws everything from seed.trial(k): the spiked arm from
// substream 0, the null arm's noise from substream 1 and power-iteration
// starts from substream 2, so results do not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiked/errors.hpp"
#include "spiked/parallel.hpp"
#include "spiked/prior.hpp"
#include "spiked/rate_functions.hpp"
#include "spiked/rng.hpp"
#include "spiked/tensor.hpp"

namespace spiked {

enum class TestKind { mle, map, injective_norm };

inline std::string test_name(TestKind k) {
  switch (k) {
    case TestKind::mle: return "mle";
    case TestKind::map: return "map";
    case TestKind::injective_norm: return "injective";
  }
  return "unknown";
}

/// Exhaustive enumeration is limited to 2^24 support points.
inline constexpr int kMaxSupportLog2 = 24;

struct PowerIterationOptions {
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
};

struct ExperimentConfig {
  SpikePrior prior = SpikePrior::rademacher();
  std::size_t n = 0;
  int d = 3;
  double lambda = 0.0;
  int trials = 1;
  RngSeed seed{};
  TestKind test = TestKind::mle;
  std::optional<double> epsilon;  // threshold margin; see margin()
  PowerIterationOptions power_iter{};
  int threads = 1;

  /// Default margin: 0.1 lambda, but never less than three standard
  /// deviations of <W, x^{(x)d}> ~ N(0, 2/n), so a spike-aligned statistic
  /// clears the threshold with high probability at small n.
  [[nodiscard]] double margin() const {
    if (epsilon) return *epsilon;
    return std::max(0.1 * lambda, 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
  }

  void validate() const {
    if (n < 1) throw std::domain_error("experiment: n must be >= 1");
    if (d < 2) throw std::domain_error("experiment: d must be >= 2");
    if (trials < 1) throw std::domain_error("experiment: trials must be >= 1");
    if (!(lambda >= 0.0)) throw std::domain_error("experiment: lambda must be >= 0");
    if (test == TestKind::map && !(lambda > 0.0)) throw std::domain_error("experiment: MAP test needs lambda > 0");
    if (power_iter.restarts < 1 || power_iter.max_iters < 1)
      throw std::domain_error("experiment: restarts and max_iters must be >= 1");
  }
};

struct TrialRecord {
  int trial = 0;
  std::string arm;  // "spiked" or "null"
  double statistic = 0.0;
  bool decision = false;  // declared spiked
  double overlap = std::numeric_limits<double>::quiet_NaN();  // <x, v_hat>, spiked arm only
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline Summary summarize(std::span<const double> v) {
  Summary s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

struct ExperimentResult {
  int trials = 0;
  double threshold = 0.0;
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  double type_i = std::numeric_limits<double>::quiet_NaN();   // null arm declared spiked
  double type_ii = std::numeric_limits<double>::quiet_NaN();  // spiked arm declared null
  double mean_abs_overlap = std::numeric_limits<double>::quiet_NaN();
  double mean_overlap_pow_d = std::numeric_limits<double>::quiet_NaN();
  Summary spiked_statistic;
  Summary null_statistic;
  bool ascent_monotone = true;  // every power-iteration run ascended
  std::vector<TrialRecord> records;

  /// Fraction of spiked-arm records with |overlap| >= level.
  [[nodiscard]] double overlap_fraction_at_least(double level) const {
    int hit = 0, total = 0;
    for (const auto& r : records) {
      if (r.arm != "spiked") continue;
      ++total;
      if (std::abs(r.overlap) >= level) ++hit;
    }
    return total ? static_cast<double>(hit) / total : std::numeric_limits<double>::quiet_NaN();
  }
};

// ---------------------------------------------------------------------------
// Exhaustive statistics
// ---------------------------------------------------------------------------

/// Calls fn(v) for one representative of each {v, -v} pair in the support:
/// the first nonzero coordinate is positive.
template <class F>
void for_each_half_support(const SpikePrior& prior, std::size_t n, F&& fn) {
  if (n < 1) throw std::domain_error("support enumeration: n must be >= 1");
  switch (prior.kind()) {
    case PriorKind::spherical:
      throw std::domain_error("support enumeration: the spherical prior has no finite support");
    case PriorKind::rademacher: {
      if (n > static_cast<std::size_t>(kMaxSupportLog2))
        throw CapacityError("support enumeration: rademacher support 2^n exceeds the cap 2^24 (n <= 24)");
      const double a = 1.0 / std::sqrt(static_cast<double>(n));
      std::vector<double> v(n, a);
      const std::uint64_t count = std::uint64_t{1} << (n - 1);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (std::size_t i = 1; i < n; ++i) v[i] = (mask >> (i - 1)) & 1U ? -a : a;
        fn(std::span<const double>(v));
      }
      return;
    }
    case PriorKind::sparse_rademacher: {
      const std::size_t k = prior.support_size(n);
      if (k < 1) throw std::domain_error("support enumeration: sparse prior has empty support");
      if (prior.log_support_count(n) > kMaxSupportLog2 * std::numbers::ln2 + 1e-9)
        throw CapacityError("support enumeration: C(n, k) 2^k exceeds the cap 2^24");
      const double a = 1.0 / std::sqrt(static_cast<double>(k));
      std::vector<std::size_t> comb(k);
      std::iota(comb.begin(), comb.end(), std::size_t{0});
      std::vector<double> v(n, 0.0);
      const std::uint64_t signs = std::uint64_t{1} << (k - 1);
      while (true) {
        for (std::uint64_t mask = 0; mask < signs; ++mask) {
          std::fill(v.begin(), v.end(), 0.0);
          v[comb[0]] = a;
          for (std::size_t j = 1; j < k; ++j) v[comb[j]] = (mask >> (j - 1)) & 1U ? -a : a;
          fn(std::span<const double>(v));
        }
        // next k-combination of {0, ..., n-1} in lexicographic order
        std::size_t j = k;
        while (j > 0 && comb[j - 1] == n - k + (j - 1)) --j;
        if (j == 0) break;
        ++comb[j - 1];
        for (std::size_t i = j; i < k; ++i) comb[i] = comb[i - 1] + 1;
      }
      return;
    }
  }
}

struct StatisticValue {
  double value = 0.0;
  UnitVector argmax;
};

/// max over the support of <T, v^{(x)d}>. Odd d uses |<T, v^{(x)d}>| on the
/// half support and returns the maximizer with the positive sign.
inline StatisticValue mle_statistic(const SymmetricTensor& t, const SpikePrior& prior) {
  const std::size_t n = t.dim();
  const int d = t.order();
  const bool odd = d % 2 == 1;
  std::vector<double> work;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_v;
  bool flip = false;
  for_each_half_support(prior, n, [&](std::span<const double> v) {
    detail::contract_trailing(t.entries(), n, d, v, work);
    double f = work[0];
    double score = odd ? std::abs(f) : f;
    if (score > best) {
      best = score;
      best_v.assign(v.begin(), v.end());
      flip = odd && f < 0.0;
    }
  });
  if (flip)
    for (auto& c : best_v) c = -c;
  return {best, UnitVector::from_coords(std::move(best_v))};
}

/// max over the support of <T, v^{(x)d}> + (2/(n lambda)) log Pr(v). The
/// priors are uniform on their support, so this is the MLE shifted by
/// -2 s_n/lambda with s_n = (1/n) log |supp|.
inline StatisticValue map_statistic(const SymmetricTensor& t, const SpikePrior& prior, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("map_statistic: lambda must be > 0");
  auto mle = mle_statistic(t, prior);
  const double n = static_cast<double>(t.dim());
  const double log_pr = -prior.log_support_count(t.dim());
  mle.value += 2.0 / (n * lambda) * log_pr;
  return mle;
}

/// s_n = (1/n) log |supp| for the finite-n support.
inline double support_entropy_density(const SpikePrior& prior, std::size_t n) {
  return prior.log_support_count(n) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Power iteration
// ---------------------------------------------------------------------------

struct NormEstimate {
  double value = 0.0;  // lower estimate of the injective norm
  UnitVector argmax;
  bool converged = false;
  bool monotone = true;
  int iterations = 0;
};

/// Shifted power iteration x <- normalize(contract(T, x) + alpha x) from
/// `start`. The shift starts at 0 and is doubled whenever a step would lower
/// <T, x^{(x)d}>, so accepted iterates ascend. For odd d each iterate takes
/// the sign that makes the objective positive.
inline NormEstimate power_iterate(const SymmetricTensor& t, UnitVector start, const PowerIterationOptions& opt) {
  const int d = t.order();
  const bool odd = d % 2 == 1;
  const std::size_t n = t.dim();
  std::vector<double> x(start.coords().begin(), start.coords().end());
  double fx = rank_one_inner(t, x);
  if (odd && fx < 0.0) {
    for (auto& c : x) c = -c;
    fx = -fx;
  }
  NormEstimate out;
  double alpha = 0.0;
  std::vector<double> y(n);
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    auto g = contract(t, x);
    const double gnorm = std::sqrt(dot(g, g));
    const double slack = 1e-14 * std::max(1.0, std::abs(fx));
    bool accepted = false;
    double fy = fx;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) y[i] = g[i] + alpha * x[i];
      double norm = std::sqrt(dot(y, y));
      if (norm == 0.0) break;
      for (auto& c : y) c /= norm;
      fy = rank_one_inner(t, y);
      if (odd && fy < 0.0) {
        for (auto& c : y) c = -c;
        fy = -fy;
      }
      if (fy >= fx - slack) {
        accepted = true;
        break;
      }
      alpha = alpha == 0.0 ? std::max(gnorm, 1e-300) : 2.0 * alpha;
    }
    if (!accepted) {
      // no ascending step at any shift: x is stationary to working precision
      out.converged = true;
      break;
    }
    if (fy < fx) out.monotone = out.monotone && fy >= fx - slack;
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) step += (y[i] - x[i]) * (y[i] - x[i]);
    x.swap(y);
    fx = fy;
    if (std::sqrt(step) < opt.tol) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.value = fx;
  out.argmax = UnitVector::normalize(std::move(x));
  return out;
}

/// Best of `restarts` power-iteration runs from uniform random starts drawn
/// from `seed`, plus one run from `spike_start` when given. A heuristic lower
/// estimate of max_{|x| = 1} <T, x^{(x)d}>.
inline NormEstimate injective_norm_estimate(const SymmetricTensor& t, const PowerIterationOptions& opt, RngSeed seed,
                                            const std::optional<UnitVector>& spike_start = std::nullopt) {
  std::vector<UnitVector> starts;
  if (spike_start) {
    if (spike_start->size() != t.dim()) throw std::invalid_argument("injective_norm_estimate: dimension mismatch");
    starts.push_back(*spike_start);
  }
  for (int r = 0; r < opt.restarts; ++r)
    starts.push_back(sample_spike(SpikePrior::spherical(), t.dim(), seed.substream(static_cast<std::uint64_t>(r))));
  NormEstimate best;
  best.value = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (const auto& s : starts) {
    auto run = power_iterate(t, s, opt);
    monotone = monotone && run.monotone;
    if (run.value > best.value) best = std::move(run);
  }
  best.monotone = monotone;
  return best;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kSpikedArm = 0;
inline constexpr std::uint64_t kNullArm = 1;
inline constexpr std::uint64_t kPowerStarts = 2;

struct ArmOutcome {
  double statistic = 0.0;
  double overlap = std::numeric_limits<double>::quiet_NaN();
  bool monotone = true;
};

inline ArmOutcome evaluate_statistic(const ExperimentConfig& cfg, const SymmetricTensor& t, RngSeed starts,
                                     const UnitVector* spike) {
  ArmOutcome out;
  UnitVector v;
  switch (cfg.test) {
    case TestKind::mle: {
      auto s = mle_statistic(t, cfg.prior);
      out.statistic = s.value;
      v = std::move(s.argmax);
      break;
    }
    case TestKind::map: {
      auto s = map_statistic(t, cfg.prior, cfg.lambda);
      out.statistic = s.value;
      v = std::move(s.argmax);
      break;
    }
    case TestKind::injective_norm: {
      auto s = injective_norm_estimate(t, cfg.power_iter, starts);
      out.statistic = s.value;
      out.monotone = s.monotone;
      v = std::move(s.argmax);
      break;
    }
  }
  if (spike) out.overlap = dot(spike->coords(), v.coords());
  return out;
}

inline void fill_overlap_stats(ExperimentResult& r, int d) {
  double abs_sum = 0.0, pow_sum = 0.0;
  int count = 0;
  for (const auto& rec : r.records) {
    if (rec.arm != "spiked") continue;
    abs_sum += std::abs(rec.overlap);
    pow_sum += std::pow(rec.overlap, d);
    ++count;
  }
  if (count) {
    r.mean_abs_overlap = abs_sum / count;
    r.mean_overlap_pow_d = pow_sum / count;
  }
}

}  // namespace detail

/// Paired detection experiment: each trial evaluates the configured statistic
/// on one spiked and one unspiked sample and thresholds it at lambda - eps
/// (MLE), lambda - 2 s_n/lambda - eps (MAP), or the midpoint of the two arms'
/// mean statistics (injective norm).
inline ExperimentResult detection_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<detail::ArmOutcome> spiked(trials), null(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t k) {
    RngSeed ts = cfg.seed.trial(k);
    auto sample = sample_spiked(cfg.prior, cfg.n, cfg.d, cfg.lambda, ts.substream(detail::kSpikedArm));
    auto noise = sample_wigner(cfg.n, cfg.d, ts.substream(detail::kNullArm));
    RngSeed starts = ts.substream(detail::kPowerStarts);
    spiked[k] = detail::evaluate_statistic(cfg, sample.tensor, starts.substream(0), &sample.spike);
    null[k] = detail::evaluate_statistic(cfg, noise, starts.substream(1), nullptr);
  });

  ExperimentResult r;
  r.trials = cfg.trials;
  std::vector<double> s_stats(trials), n_stats(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    s_stats[k] = spiked[k].statistic;
    n_stats[k] = null[k].statistic;
    r.ascent_monotone = r.ascent_monotone && spiked[k].monotone && null[k].monotone;
  }
  r.spiked_statistic = summarize(s_stats);
  r.null_statistic = summarize(n_stats);
  switch (cfg.test) {
    case TestKind::mle: r.threshold = cfg.lambda - cfg.margin(); break;
    case TestKind::map:
      r.threshold = cfg.lambda - 2.0 * support_entropy_density(cfg.prior, cfg.n) / cfg.lambda - cfg.margin();
      break;
    case TestKind::injective_norm: r.threshold = 0.5 * (r.spiked_statistic.mean + r.null_statistic.mean); break;
  }
  int miss = 0, false_alarm = 0;
  r.records.reserve(2 * trials);
  for (std::size_t k = 0; k < trials; ++k) {
    bool s_dec = s_stats[k] >= r.threshold;
    bool n_dec = n_stats[k] >= r.threshold;
    miss += s_dec ? 0 : 1;
    false_alarm += n_dec ? 1 : 0;
    r.records.push_back({static_cast<int>(k), "spiked", s_stats[k], s_dec, spiked[k].overlap});
    r.records.push_back({static_cast<int>(k), "null", n_stats[k], n_dec, std::numeric_limits<double>::quiet_NaN()});
  }
  r.type_i = static_cast<double>(false_alarm) / cfg.trials;
  r.type_ii = static_cast<double>(miss) / cfg.trials;
  r.accuracy = 1.0 - static_cast<double>(miss + false_alarm) / (2.0 * cfg.trials);
  detail::fill_overlap_stats(r, cfg.d);
  return r;
}

/// Recovery experiment: overlap of the statistic's maximizer with the spike on
/// spiked samples only. lambda = 0 is allowed for the MLE and injective tests.
inline ExperimentResult recovery_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<detail::ArmOutcome> spiked(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t k) {
    RngSeed ts = cfg.seed.trial(k);
    auto sample = sample_spiked(cfg.prior, cfg.n, cfg.d, cfg.lambda, ts.substream(detail::kSpikedArm));
    spiked[k] = detail::evaluate_statistic(cfg, sample.tensor, ts.substream(detail::kPowerStarts).substream(0),
                                           &sample.spike);
  });
  ExperimentResult r;
  r.trials = cfg.trials;
  std::vector<double> stats(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    stats[k] = spiked[k].statistic;
    r.ascent_monotone = r.ascent_monotone && spiked[k].monotone;
    r.records.push_back({static_cast<int>(k), "spiked", stats[k], false, spiked[k].overlap});
  }
  r.spiked_statistic = summarize(stats);
  detail::fill_overlap_stats(r, cfg.d);
  return r;
}

struct OverlapTailRow {
  double t = 0.0;
  double empirical_tail = 0.0;
  double standard_error = 0.0;
  double empirical_rate = 0.0;  // -(1/n) log(empirical tail); inf when no hits
  double rate = std::numeric_limits<double>::quiet_NaN();        // f(t)
  double exact_tail = std::numeric_limits<double>::quiet_NaN();  // when computable
  double exact_rate = std::numeric_limits<double>::quiet_NaN();
};

/// Empirical Pr[<x, x'> >= t] from `trials` independent spike pairs, next to
/// the rate function and the exact finite-n tail where available.
inline std::vector<OverlapTailRow> overlap_tail_experiment(const SpikePrior& prior, std::size_t n, int trials,
                                                          const std::vector<double>& t_grid, RngSeed seed,
                                                          int threads = 1) {
  if (trials < 1) throw std::domain_error("overlap_tail_experiment: trials must be >= 1");
  std::vector<double> overlaps(static_cast<std::size_t>(trials));
  parallel_for(overlaps.size(), threads, [&](std::size_t k) {
    RngSeed ts = seed.trial(k);
    auto x = sample_spike(prior, n, ts.substream(0));
    auto y = sample_spike(prior, n, ts.substream(1));
    overlaps[k] = dot(x.coords(), y.coords());
  });
  std::sort(overlaps.begin(), overlaps.end());
  RateFunction rate(prior);
  const bool exact_available = !prior.is_discrete() || n <= kExactTailMaxN;
  const double nn = static_cast<double>(n);
  std::vector<OverlapTailRow> rows;
  for (double t : t_grid) {
    OverlapTailRow row;
    row.t = t;
    auto first = std::lower_bound(overlaps.begin(), overlaps.end(), t - detail::kOverlapSlack);
    double p = static_cast<double>(overlaps.end() - first) / trials;
    row.empirical_tail = p;
    row.standard_error = std::sqrt(p * (1.0 - p) / trials);
    row.empirical_rate = p > 0.0 ? -std::log(p) / nn : std::numeric_limits<double>::infinity();
    if (t >= 0.0 && (t < 1.0 || (t == 1.0 && rate.defined_at_one()))) row.rate = rate(t);
    if (exact_available) {
      double lt = exact_overlap_log_tail(prior, n, t);
      row.exact_tail = std::exp(lt);
      row.exact_rate = -lt / nn;
    }
    rows.push_back(row);
  }
  return rows;
}

struct BbpTrial {
  double top_eigenvalue = 0.0;
  double overlap_sq = 0.0;  // <v, x>^2 for the top eigenvector v
  int iterations = 0;
  bool converged = false;
};

struct BbpSummary {
  std::size_t n = 0;
  double lambda = 0.0;
  double mean_top_eigenvalue = 0.0;
  double sd_top_eigenvalue = 0.0;
  double mean_overlap_sq = 0.0;
  double predicted_top_eigenvalue = 0.0;  // lambda + 1/lambda above 1, else 2
  double predicted_overlap_sq = 0.0;      // 1 - 1/lambda^2 above 1, else 0
  int converged_trials = 0;
  std::vector<BbpTrial> trials;
};

struct BbpOptions {
  int max_iters = 5000;
  double tol = 1e-8;
};

/// Top eigenpair of a symmetric matrix (d = 2 tensor) by power iteration on
/// T + cI with c = 1 + max absolute row sum, which makes T + cI positive
/// definite.
inline BbpTrial top_eigenpair(const SymmetricTensor& t, const UnitVector& spike, RngSeed start_seed,
                              const BbpOptions& opt = {}) {
  if (t.order() != 2) throw std::invalid_argument("top_eigenpair: needs an order-2 tensor");
  const std::size_t n = t.dim();
  auto a = t.entries();
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(a[i * n + j]);
    c = std::max(c, s);
  }
  c += 1.0;
  auto start = sample_spike(SpikePrior::spherical(), n, start_seed);
  std::vector<double> x(start.coords().begin(), start.coords().end()), y(n);
  BbpTrial out;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = c * x[i];
      const double* row = a.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    double norm = std::sqrt(dot(y, y));
    for (auto& v : y) v /= norm;
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) step += (y[i] - x[i]) * (y[i] - x[i]);
    x.swap(y);
    if (std::sqrt(step) < opt.tol) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.top_eigenvalue = rank_one_inner(t, x);
  double ov = dot(x, spike.coords());
  out.overlap_sq = ov * ov;
  return out;
}

inline BbpSummary bbp_reference_experiment(std::size_t n, double lambda, int trials, RngSeed seed, int threads = 1,
                                           const SpikePrior& prior = SpikePrior::spherical(),
                                           const BbpOptions& opt = {}) {
  if (trials < 1) throw std::domain_error("bbp_reference_experiment: trials must be >= 1");
  if (!(lambda >= 0.0)) throw std::domain_error("bbp_reference_experiment: lambda must be >= 0");
  BbpSummary s;
  s.n = n;
  s.lambda = lambda;
  s.trials.resize(static_cast<std::size_t>(trials));
  parallel_for(s.trials.size(), threads, [&](std::size_t k) {
    RngSeed ts = seed.trial(k);
    auto sample = sample_spiked(prior, n, 2, lambda, ts.substream(detail::kSpikedArm));
    s.trials[k] = top_eigenpair(sample.tensor, sample.spike, ts.substream(detail::kPowerStarts), opt);
  });
  std::vector<double> tops;
  double ov = 0.0;
  for (const auto& t : s.trials) {
    tops.push_back(t.top_eigenvalue);
    ov += t.overlap_sq;
    s.converged_trials += t.converged ? 1 : 0;
  }
  auto sum = summarize(tops);
  s.mean_top_eigenvalue = sum.mean;
  s.sd_top_eigenvalue = sum.sd;
  s.mean_overlap_sq = ov / trials;
  s.predicted_top_eigenvalue = lambda > 1.0 ? lambda + 1.0 / lambda : 2.0;
  s.predicted_overlap_sq = lambda > 1.0 ? 1.0 - 1.0 / (lambda * lambda) : 0.0;
  return s;
}

}  // namespace spiked
