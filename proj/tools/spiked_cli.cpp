// spiked-tensor: threshold tables, rate functions, replica curves and
// Monte Carlo runs for the spiked Wigner tensor model, as CSV or JSON.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spiked/montecarlo.hpp"
#include "spiked/numeric.hpp"
#include "spiked/parallel.hpp"
#include "spiked/prior.hpp"
#include "spiked/rate_functions.hpp"
#include "spiked/replica.hpp"
#include "spiked/report.hpp"
#include "spiked/table.hpp"

namespace {

using spiked::Cell;
using spiked::Table;

struct CommonOptions {
  std::string format = "csv";
  std::string out;
  int threads = 1;
  int precision = 9;
};

struct PriorOptions {
  std::string prior = "rademacher";
  std::optional<double> rho;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CLI::ValidationError(msg); }

spiked::SpikePrior make_prior(const PriorOptions& p) {
  if (p.prior == "spherical") return spiked::SpikePrior::spherical();
  if (p.prior == "rademacher") return spiked::SpikePrior::rademacher();
  if (p.prior == "sparse") {
    if (!p.rho) usage_error("--prior sparse requires --rho");
    if (!(*p.rho > 0.0 && *p.rho <= 1.0)) usage_error("--rho must lie in (0, 1]");
    return spiked::SpikePrior::sparse(*p.rho);
  }
  if (p.rho) usage_error("--rho applies to the sparse prior only");
  usage_error("--prior must be spherical, rademacher or sparse");
}

int effective_threads(int flag) {
  if (const char* env = std::getenv("SPIKED_TENSOR_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("SPIKED_TENSOR_THREADS must be a positive integer");
  }
  return std::max(1, flag);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    usage_error("cannot parse " + what + " value '" + s + "'");
  }
}

/// "5" or "3..10" (inclusive).
std::pair<int, int> parse_d_range(const std::string& s) {
  auto dots = s.find("..");
  int a = 0, b = 0;
  try {
    if (dots == std::string::npos) {
      a = b = std::stoi(s);
    } else {
      a = std::stoi(s.substr(0, dots));
      b = std::stoi(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    usage_error("--d must be an integer or a range a..b, got '" + s + "'");
  }
  if (a < 2 || b > 1000000 || a > b) usage_error("--d must lie within 2..1000000 with a <= b");
  return {a, b};
}

/// "x", "a..b" (with `points` evenly spaced values) or "x1,x2,...".
std::vector<double> parse_value_list(const std::string& s, int points, const std::string& what) {
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    double a = parse_double(s.substr(0, dots), what);
    double b = parse_double(s.substr(dots + 2), what);
    if (points < 2) usage_error("--points must be >= 2 for a range");
    return spiked::numeric::linspace(a, b, static_cast<std::size_t>(points));
  }
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) usage_error(what + " is empty");
  return out;
}

void emit(const Table& t, const CommonOptions& common) {
  spiked::OutputSpec spec;
  if (common.format == "csv") {
    spec.format = spiked::OutputFormat::csv;
  } else if (common.format == "json") {
    spec.format = spiked::OutputFormat::json;
  } else {
    usage_error("--format must be csv or json");
  }
  if (!common.out.empty()) spec.path = common.out;
  spec.precision = common.precision;
  spiked::write_output(spiked::render(t, spec), spec.path);
}

Cell flag(bool b) { return Cell{static_cast<long long>(b ? 1 : 0)}; }

void add_common(CLI::App* cmd, CommonOptions& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "Write to this file instead of stdout");
  cmd->add_option("--threads", c.threads, "Worker threads (SPIKED_TENSOR_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--precision", c.precision, "Significant digits for numbers")->check(CLI::Range(1, 17));
}

void add_prior(CLI::App* cmd, PriorOptions& p) {
  cmd->add_option("--prior", p.prior, "Spike prior")->check(CLI::IsMember({"spherical", "rademacher", "sparse"}));
  cmd->add_option("--rho", p.rho, "Sparsity of the sparse prior, in (0, 1]");
}

// ---------------------------------------------------------------------------
// thresholds
// ---------------------------------------------------------------------------

struct ThresholdsOptions {
  PriorOptions prior;
  CommonOptions common;
  std::string d = "3..10";
  bool replica = false;
  bool asymptotics = false;
};

void run_thresholds(const ThresholdsOptions& o) {
  auto prior = make_prior(o.prior);
  auto [d_lo, d_hi] = parse_d_range(o.d);
  if (o.replica && prior.kind() == spiked::PriorKind::sparse_rademacher)
    usage_error("--replica is available for the spherical and rademacher priors only");
  const auto count = static_cast<std::size_t>(d_hi - d_lo + 1);
  std::vector<spiked::ThresholdReport> reports(count);
  spiked::parallel_for(count, effective_threads(o.common.threads), [&](std::size_t i) {
    int d = d_lo + static_cast<int>(i);
    reports[i] = spiked::threshold_report(prior, d, o.replica && d >= 3);
  });

  Table t;
  t.command = "thresholds";
  t.columns = {"d", "lambda_lower", "lambda_upper", "mu_d"};
  if (o.replica) {
    t.columns.push_back("replica_lambda1");
    t.columns.push_back("replica_lambda2");
  }
  if (o.asymptotics) {
    t.columns.push_back("asymptotic_lower");
    t.columns.push_back("asymptotic_upper");
    t.columns.push_back("asymptotic_mu");
  }
  for (const char* c : {"t_star", "generic_lambda_lower", "sigma2", "sigma2_estimated"}) t.columns.push_back(c);
  for (const auto& r : reports) {
    std::vector<Cell> row{static_cast<long long>(r.d), r.lambda_lower, r.lambda_upper, spiked::optional_cell(r.mu_d)};
    if (o.replica) {
      row.push_back(spiked::optional_cell(r.diagnostics.replica_lambda1));
      row.push_back(spiked::optional_cell(r.replica_prediction));
    }
    if (o.asymptotics) {
      row.push_back(spiked::optional_cell(r.asymptotic_lower));
      row.push_back(spiked::optional_cell(r.asymptotic_upper));
      row.push_back(spiked::optional_cell(r.asymptotic_mu));
    }
    row.push_back(r.diagnostics.t_star);
    row.push_back(r.diagnostics.generic_lambda_lower);
    row.push_back(r.diagnostics.sigma2);
    row.push_back(flag(r.diagnostics.sigma2_is_curvature_estimate));
    t.add_row(std::move(row));
  }
  t.meta["prior"] = prior.name();
  if (auto rho = prior.rho()) t.meta["rho"] = *rho;
  t.meta["sigma2_is_curvature_estimate"] = spiked::RateFunction(prior).sigma2_is_curvature_estimate();
  emit(t, o.common);
}

// ---------------------------------------------------------------------------
// ratefn
// ---------------------------------------------------------------------------

struct RatefnOptions {
  PriorOptions prior;
  CommonOptions common;
  int grid = 101;
  std::optional<double> tmax;
  std::optional<int> n;
};

void run_ratefn(const RatefnOptions& o) {
  auto prior = make_prior(o.prior);
  if (o.grid < 2) usage_error("--grid must be >= 2");
  spiked::RateFunction rate(prior);
  double tmax = o.tmax.value_or(rate.defined_at_one() ? 1.0 : 1.0 - 1e-6);
  if (!(tmax > 0.0 && tmax <= 1.0)) usage_error("--tmax must lie in (0, 1]");
  if (tmax == 1.0 && !rate.defined_at_one()) usage_error("the spherical rate function diverges at t = 1; use --tmax < 1");
  if (o.n && *o.n < 1) usage_error("--n must be >= 1");
  auto ts = spiked::numeric::linspace(0.0, tmax, static_cast<std::size_t>(o.grid));
  std::vector<std::vector<Cell>> rows(ts.size());
  spiked::parallel_for(ts.size(), effective_threads(o.common.threads), [&](std::size_t i) {
    std::vector<Cell> row{ts[i], rate(ts[i])};
    if (o.n) {
      double lt = spiked::exact_overlap_log_tail(prior, static_cast<std::size_t>(*o.n), ts[i]);
      row.push_back(std::exp(lt));
      row.push_back(-lt / *o.n);
    }
    rows[i] = std::move(row);
  });
  Table t;
  t.command = "ratefn";
  t.columns = {"t", "f"};
  if (o.n) {
    t.columns.push_back("exact_tail");
    t.columns.push_back("exact_rate");
  }
  for (auto& r : rows) t.add_row(std::move(r));
  t.meta["prior"] = prior.name();
  if (auto rho = prior.rho()) t.meta["rho"] = *rho;
  t.meta["collision_entropy"] = spiked::format_double(rate.collision_entropy(), 17);
  if (o.n) t.meta["n"] = *o.n;
  emit(t, o.common);
}

// ---------------------------------------------------------------------------
// replica
// ---------------------------------------------------------------------------

struct ReplicaOptions {
  PriorOptions prior;
  CommonOptions common;
  std::string d = "3";
  std::string lambda;
  int points = 50;
  bool thresholds = false;
};

void run_replica(const ReplicaOptions& o) {
  auto prior = make_prior(o.prior);
  if (prior.kind() == spiked::PriorKind::sparse_rademacher)
    usage_error("replica: the sparse prior is not supported (spherical or rademacher only)");
  const bool rade = prior.kind() == spiked::PriorKind::rademacher;
  auto [d_lo, d_hi] = parse_d_range(o.d);
  const int threads = effective_threads(o.common.threads);
  Table t;
  t.meta["prior"] = prior.name();

  if (o.thresholds) {
    t.command = "replica_thresholds";
    t.columns = {"d", "lambda1", "lambda2", "peak"};
    const auto count = static_cast<std::size_t>(d_hi - d_lo + 1);
    std::vector<spiked::ReplicaThresholds> res(count);
    spiked::parallel_for(count, threads, [&](std::size_t i) {
      int d = d_lo + static_cast<int>(i);
      if (d == 2) {
        // continuous transition: appearance point only, no free-energy crossing
        double l1 = rade ? spiked::rademacher_appearance_lambda(2, 0.5, 2.0, 1e-6) : 1.0;
        res[i] = {l1, std::nan(""), 0.0};
      } else {
        res[i] = rade ? spiked::rademacher_replica_thresholds(d) : spiked::spherical_replica_thresholds(d);
      }
    });
    for (std::size_t i = 0; i < count; ++i)
      t.add_row({static_cast<long long>(d_lo + static_cast<int>(i)), res[i].lambda1, res[i].lambda2, res[i].peak});
    emit(t, o.common);
    return;
  }

  if (o.lambda.empty()) usage_error("replica: give --lambda or --thresholds");
  auto lambdas = parse_value_list(o.lambda, o.points, "--lambda");
  for (double l : lambdas)
    if (!(l > 0.0)) usage_error("--lambda values must be > 0");
  t.command = "replica";
  t.columns = {"d", "lambda", "branch", "q", "mu", "free_energy", "residual"};
  struct Job {
    int d;
    double lambda;
  };
  std::vector<Job> jobs;
  for (int d = d_lo; d <= d_hi; ++d)
    for (double l : lambdas) jobs.push_back({d, l});
  std::vector<std::vector<std::vector<Cell>>> out(jobs.size());
  spiked::parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto [d, l] = jobs[i];
    if (rade) {
      for (const auto& s : spiked::rademacher_fixed_points(d, l))
        out[i].push_back({static_cast<long long>(d), l, spiked::branch_name(s.branch), s.q, s.mu, s.free_energy,
                          s.residual});
    } else {
      for (const auto& s : spiked::spherical_fixed_points(d, l))
        out[i].push_back({static_cast<long long>(d), l, spiked::branch_name(s.branch), s.q, std::nan(""),
                          s.free_energy, s.residual});
    }
  });
  for (auto& rows : out)
    for (auto& r : rows) t.add_row(std::move(r));
  emit(t, o.common);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  PriorOptions prior;
  CommonOptions common;
  int n = 14;
  int d = 3;
  double lambda = 0.0;
  int trials = 100;
  std::uint64_t seed = 1;
  std::string test = "mle";
  std::optional<double> epsilon;
  int restarts = 20;
  int max_iters = 500;
  std::string records;
  std::string t_grid = "0,0.1,0.2,0.3,0.4,0.5";
  int points = 11;
  bool spike_start = false;
};

spiked::ExperimentConfig make_config(const SimulateOptions& o) {
  spiked::ExperimentConfig c;
  c.prior = make_prior(o.prior);
  if (o.n < 1) usage_error("--n must be >= 1");
  c.n = static_cast<std::size_t>(o.n);
  c.d = o.d;
  c.lambda = o.lambda;
  c.trials = o.trials;
  c.seed = spiked::RngSeed{o.seed, 0};
  if (o.test == "mle") {
    c.test = spiked::TestKind::mle;
  } else if (o.test == "map") {
    c.test = spiked::TestKind::map;
  } else {
    c.test = spiked::TestKind::injective_norm;
  }
  c.epsilon = o.epsilon;
  c.power_iter.restarts = o.restarts;
  c.power_iter.max_iters = o.max_iters;
  c.threads = effective_threads(o.common.threads);
  c.validate();
  return c;
}

void write_records(const spiked::ExperimentResult& r, const std::string& path, int precision) {
  Table t;
  t.columns = {"trial", "arm", "statistic", "decision", "overlap"};
  for (const auto& rec : r.records)
    t.add_row({static_cast<long long>(rec.trial), rec.arm, rec.statistic, flag(rec.decision), rec.overlap});
  spiked::write_output(spiked::to_csv(t, precision), path);
}

void config_meta(Table& t, const spiked::ExperimentConfig& c, std::uint64_t seed) {
  t.meta["prior"] = c.prior.name();
  if (auto rho = c.prior.rho()) t.meta["rho"] = *rho;
  t.meta["seed"] = seed;
}

void run_detect(const SimulateOptions& o) {
  auto cfg = make_config(o);
  auto r = spiked::detection_experiment(cfg);
  Table t;
  t.command = "simulate_detect";
  t.columns = {"test", "n", "d", "lambda", "epsilon", "trials", "threshold", "accuracy", "type_i", "type_ii",
               "mean_spiked_statistic", "mean_null_statistic", "mean_abs_overlap", "ascent_monotone"};
  t.add_row({spiked::test_name(cfg.test), static_cast<long long>(cfg.n), static_cast<long long>(cfg.d), cfg.lambda,
             cfg.margin(), static_cast<long long>(cfg.trials), r.threshold, r.accuracy, r.type_i, r.type_ii,
             r.spiked_statistic.mean, r.null_statistic.mean, r.mean_abs_overlap, flag(r.ascent_monotone)});
  config_meta(t, cfg, o.seed);
  emit(t, o.common);
  if (!o.records.empty()) write_records(r, o.records, o.common.precision);
}

void run_recover(const SimulateOptions& o) {
  auto cfg = make_config(o);
  auto r = spiked::recovery_experiment(cfg);
  Table t;
  t.command = "simulate_recover";
  t.columns = {"test", "n", "d", "lambda", "trials", "mean_abs_overlap", "mean_overlap_pow_d",
               "fraction_abs_overlap_ge_0.8", "ascent_monotone"};
  t.add_row({spiked::test_name(cfg.test), static_cast<long long>(cfg.n), static_cast<long long>(cfg.d), cfg.lambda,
             static_cast<long long>(cfg.trials), r.mean_abs_overlap, r.mean_overlap_pow_d,
             r.overlap_fraction_at_least(0.8), flag(r.ascent_monotone)});
  config_meta(t, cfg, o.seed);
  emit(t, o.common);
  if (!o.records.empty()) write_records(r, o.records, o.common.precision);
}

void run_tails(const SimulateOptions& o) {
  auto prior = make_prior(o.prior);
  if (o.n < 1 || o.trials < 1) usage_error("--n and --trials must be >= 1");
  auto grid = parse_value_list(o.t_grid, o.points, "--t-grid");
  auto rows = spiked::overlap_tail_experiment(prior, static_cast<std::size_t>(o.n), o.trials, grid,
                                              spiked::RngSeed{o.seed, 0}, effective_threads(o.common.threads));
  Table t;
  t.command = "simulate_tails";
  t.columns = {"t", "empirical_tail", "standard_error", "empirical_rate", "rate", "exact_tail", "exact_rate"};
  for (const auto& r : rows)
    t.add_row({r.t, r.empirical_tail, r.standard_error, r.empirical_rate, r.rate, r.exact_tail, r.exact_rate});
  t.meta["prior"] = prior.name();
  t.meta["n"] = o.n;
  t.meta["trials"] = o.trials;
  t.meta["seed"] = o.seed;
  emit(t, o.common);
}

void run_norms(const SimulateOptions& o) {
  auto cfg = make_config(o);
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<spiked::NormEstimate> est(trials);
  std::vector<double> at_spike(trials, std::nan(""));
  spiked::parallel_for(trials, cfg.threads, [&](std::size_t k) {
    auto ts = cfg.seed.trial(k);
    auto sample = spiked::sample_spiked(cfg.prior, cfg.n, cfg.d, cfg.lambda, ts.substream(0));
    std::optional<spiked::UnitVector> start;
    if (o.spike_start) start = sample.spike;
    est[k] = spiked::injective_norm_estimate(sample.tensor, cfg.power_iter, ts.substream(2).substream(0), start);
    at_spike[k] = spiked::rank_one_inner(sample.tensor, sample.spike);
  });
  Table t;
  t.command = "simulate_norms";
  t.columns = {"trial", "norm_estimate", "value_at_spike", "converged", "monotone", "iterations"};
  for (std::size_t k = 0; k < trials; ++k)
    t.add_row({static_cast<long long>(k), est[k].value, at_spike[k], flag(est[k].converged), flag(est[k].monotone),
               static_cast<long long>(est[k].iterations)});
  config_meta(t, cfg, o.seed);
  t.meta["lambda"] = cfg.lambda;
  t.meta["d"] = cfg.d;
  t.meta["n"] = cfg.n;
  emit(t, o.common);
}

void run_bbp(const SimulateOptions& o) {
  auto prior = make_prior(o.prior);
  if (o.n < 1 || o.trials < 1) usage_error("--n and --trials must be >= 1");
  if (!(o.lambda >= 0.0)) usage_error("--lambda must be >= 0");
  auto s = spiked::bbp_reference_experiment(static_cast<std::size_t>(o.n), o.lambda, o.trials,
                                            spiked::RngSeed{o.seed, 0}, effective_threads(o.common.threads), prior);
  Table t;
  t.command = "simulate_bbp";
  t.columns = {"n", "lambda", "trials", "mean_top_eigenvalue", "sd_top_eigenvalue", "predicted_top_eigenvalue",
               "mean_overlap_sq", "predicted_overlap_sq", "converged_trials"};
  t.add_row({static_cast<long long>(s.n), s.lambda, static_cast<long long>(o.trials), s.mean_top_eigenvalue,
             s.sd_top_eigenvalue, s.predicted_top_eigenvalue, s.mean_overlap_sq, s.predicted_overlap_sq,
             static_cast<long long>(s.converged_trials)});
  t.meta["prior"] = prior.name();
  t.meta["seed"] = o.seed;
  emit(t, o.common);
}

void add_sim_options(CLI::App* cmd, SimulateOptions& o, bool statistic) {
  add_prior(cmd, o.prior);
  add_common(cmd, o.common);
  cmd->add_option("--n", o.n, "Dimension");
  cmd->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--lambda", o.lambda, "Signal-to-noise ratio");
  if (statistic) {
    cmd->add_option("--d", o.d, "Tensor order")->check(CLI::Range(2, 16));
    cmd->add_option("--test", o.test, "Statistic")->check(CLI::IsMember({"mle", "map", "injective"}));
    cmd->add_option("--restarts", o.restarts, "Power-iteration restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", o.max_iters, "Power-iteration iteration cap")->check(CLI::PositiveNumber);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiked tensor thresholds, rate functions, replica curves and simulations"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  ThresholdsOptions th;
  auto* th_cmd = app.add_subcommand("thresholds", "Lower/upper detection thresholds per tensor order");
  add_prior(th_cmd, th.prior);
  add_common(th_cmd, th.common);
  th_cmd->add_option("--d", th.d, "Tensor order, single value or range a..b");
  th_cmd->add_flag("--replica", th.replica, "Add replica-symmetric thresholds");
  th_cmd->add_flag("--asymptotics", th.asymptotics, "Add large-d / small-rho asymptotic values");

  RatefnOptions rf;
  auto* rf_cmd = app.add_subcommand("ratefn", "Rate function table on a uniform t-grid");
  add_prior(rf_cmd, rf.prior);
  add_common(rf_cmd, rf.common);
  rf_cmd->add_option("--grid", rf.grid, "Number of grid points (>= 2)");
  rf_cmd->add_option("--tmax", rf.tmax, "Largest t (default 1, or 1 - 1e-6 for spherical)");
  rf_cmd->add_option("--n", rf.n, "Add exact finite-n tail columns for this dimension");

  ReplicaOptions rp;
  auto* rp_cmd = app.add_subcommand("replica", "Replica-symmetric fixed points or thresholds");
  add_prior(rp_cmd, rp.prior);
  add_common(rp_cmd, rp.common);
  rp_cmd->add_option("--d", rp.d, "Tensor order, single value or range a..b");
  rp_cmd->add_option("--lambda", rp.lambda, "Value, comma list, or range a..b");
  rp_cmd->add_option("--points", rp.points, "Points in a --lambda range");
  rp_cmd->add_flag("--thresholds", rp.thresholds, "Emit (lambda1, lambda2) per d");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  sim->require_subcommand(1);
  SimulateOptions det, rec, tails, norms, bbp;
  auto* det_cmd = sim->add_subcommand("detect", "Paired spiked/unspiked detection test");
  add_sim_options(det_cmd, det, true);
  det_cmd->add_option("--epsilon", det.epsilon, "Threshold margin (default max(0.1 lambda, 3 sqrt(2/n)))");
  det_cmd->add_option("--records", det.records, "Write per-trial CSV to this path");
  auto* rec_cmd = sim->add_subcommand("recover", "Overlap of the statistic's maximizer with the spike");
  add_sim_options(rec_cmd, rec, true);
  rec_cmd->add_option("--records", rec.records, "Write per-trial CSV to this path");
  auto* tails_cmd = sim->add_subcommand("tails", "Empirical overlap tails against the rate function");
  add_sim_options(tails_cmd, tails, false);
  tails_cmd->add_option("--t-grid", tails.t_grid, "t values: comma list or range a..b");
  tails_cmd->add_option("--points", tails.points, "Points in a --t-grid range");
  auto* norms_cmd = sim->add_subcommand("norms", "Injective-norm estimates by power iteration");
  add_sim_options(norms_cmd, norms, true);
  norms_cmd->add_flag("--spike-start", norms.spike_start, "Also start one run at the planted spike");
  auto* bbp_cmd = sim->add_subcommand("bbp", "Top eigenpair of spiked Wigner matrices");
  add_sim_options(bbp_cmd, bbp, false);
  bbp.prior.prior = "spherical";
  bbp.n = 1000;
  bbp.lambda = 2.0;
  bbp.trials = 20;

  try {
    app.parse(argc, argv);
    if (th_cmd->parsed()) run_thresholds(th);
    if (rf_cmd->parsed()) run_ratefn(rf);
    if (rp_cmd->parsed()) run_replica(rp);
    if (det_cmd->parsed()) run_detect(det);
    if (rec_cmd->parsed()) run_recover(rec);
    if (tails_cmd->parsed()) run_tails(tails);
    if (norms_cmd->parsed()) run_norms(norms);
    if (bbp_cmd->parsed()) run_bbp(bbp);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const spiked::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
