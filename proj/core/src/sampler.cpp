#include "relscm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "relscm/errors.hpp"

namespace relscm {

namespace {

using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxDeltaH = 1000.0;

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct PhasePoint {
  VectorXd q;
  VectorXd p;
  VectorXd grad;
  double logp = -kInf;
};

/// Stan-style dual averaging of log step size.
class DualAveraging {
 public:
  void restart(double step_size) {
    mu_ = std::log(10.0 * step_size);
    counter_ = 0;
    s_bar_ = 0.0;
    x_bar_ = 0.0;
  }

  double learn(double accept_stat, double target) {
    ++counter_;
    accept_stat = std::min(1.0, accept_stat);
    const double eta = 1.0 / (counter_ + kT0);
    s_bar_ = (1.0 - eta) * s_bar_ + eta * (target - accept_stat);
    const double x = mu_ - s_bar_ * std::sqrt(static_cast<double>(counter_)) / kGamma;
    const double x_eta = std::pow(static_cast<double>(counter_), -kKappa);
    x_bar_ = (1.0 - x_eta) * x_bar_ + x_eta * x;
    return std::exp(x);
  }

  double final_step_size() const { return std::exp(x_bar_); }

 private:
  static constexpr double kGamma = 0.05;
  static constexpr double kKappa = 0.75;
  static constexpr double kT0 = 10.0;
  double mu_ = 0.0;
  long counter_ = 0;
  double s_bar_ = 0.0;
  double x_bar_ = 0.0;
};

/// Welford running variance.
class VarianceEstimator {
 public:
  explicit VarianceEstimator(int dim) : mean_(VectorXd::Zero(dim)), m2_(VectorXd::Zero(dim)) {}
  void restart() {
    n_ = 0;
    mean_.setZero();
    m2_.setZero();
  }
  void add(const VectorXd& x) {
    ++n_;
    const VectorXd delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta.cwiseProduct(x - mean_);
  }
  /// Regularized towards 1e-3 as in Stan.
  VectorXd regularized_variance() const {
    const double n = static_cast<double>(n_);
    const VectorXd var = m2_ / std::max(1.0, n - 1.0);
    return (n / (n + 5.0)) * var + VectorXd::Constant(var.size(), 1e-3 * (5.0 / (n + 5.0)));
  }

 private:
  long n_ = 0;
  VectorXd mean_;
  VectorXd m2_;
};

class Nuts {
 public:
  Nuts(const LogDensity& target, int dim, Rng& rng, int max_depth)
      : target_(target), rng_(rng), max_depth_(max_depth), inv_metric_(VectorXd::Ones(dim)) {}

  struct Transition {
    double accept_stat = 0.0;
    int depth = 0;
    int n_leapfrog = 0;
    bool divergent = false;
  };

  double step_size = 1.0;

  void set_inv_metric(const VectorXd& m) { inv_metric_ = m; }
  const VectorXd& inv_metric() const { return inv_metric_; }

  void evaluate(PhasePoint& z) const {
    z.logp = target_(z.q, z.grad);
    if (!std::isfinite(z.logp)) z.logp = -kInf;
  }

  /// Doubling/halving heuristic targeting a one-step acceptance near 0.8.
  void init_step_size(const PhasePoint& start) {
    PhasePoint z = start;
    sample_momentum(z);
    const double h0 = hamiltonian(z);
    leapfrog(z, step_size);
    double delta_h = h0 - hamiltonian(z);
    const int direction = delta_h > std::log(0.8) ? 1 : -1;
    for (int iter = 0; iter < 100; ++iter) {
      z = start;
      sample_momentum(z);
      const double h = hamiltonian(z);
      leapfrog(z, step_size);
      delta_h = h - hamiltonian(z);
      if (!std::isfinite(delta_h)) delta_h = -kInf;
      if (direction == 1 && !(delta_h > std::log(0.8))) break;
      if (direction == -1 && !(delta_h < std::log(0.8))) break;
      step_size = direction == 1 ? 2.0 * step_size : 0.5 * step_size;
      if (step_size > 1e7) throw ConfigError("posterior is improper: step size diverged");
      if (step_size == 0.0) throw ConfigError("no acceptably small step size found");
    }
  }

  Transition transition(PhasePoint& current) {
    Transition out;
    PhasePoint z = current;
    sample_momentum(z);
    const double h0 = hamiltonian(z);

    PhasePoint z_fwd = z;
    PhasePoint z_bck = z;
    PhasePoint z_sample = z;
    PhasePoint z_propose = z;

    VectorXd p_sharp = inv_metric_.cwiseProduct(z.p);
    VectorXd p_fwd_fwd = z.p, p_sharp_fwd_fwd = p_sharp;
    VectorXd p_fwd_bck = z.p, p_sharp_fwd_bck = p_sharp;
    VectorXd p_bck_fwd = z.p, p_sharp_bck_fwd = p_sharp;
    VectorXd p_bck_bck = z.p, p_sharp_bck_bck = p_sharp;
    VectorXd rho = z.p;

    double log_sum_weight = 0.0;
    double sum_metro_prob = 0.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int dim = static_cast<int>(z.q.size());

    while (out.depth < max_depth_) {
      VectorXd rho_fwd = VectorXd::Zero(dim);
      VectorXd rho_bck = VectorXd::Zero(dim);
      bool valid = false;
      double log_sum_weight_subtree = -kInf;

      if (unif(rng_) > 0.5) {
        rho_bck = rho;
        p_bck_fwd = p_fwd_bck;
        p_sharp_bck_fwd = p_sharp_fwd_bck;
        valid = build_tree(out.depth, z_fwd, z_propose, p_sharp_fwd_bck, p_sharp_fwd_fwd, rho_fwd, p_fwd_bck,
                           p_fwd_fwd, h0, 1.0, out.n_leapfrog, log_sum_weight_subtree, sum_metro_prob,
                           out.divergent);
      } else {
        rho_fwd = rho;
        p_fwd_bck = p_bck_fwd;
        p_sharp_fwd_bck = p_sharp_bck_fwd;
        valid = build_tree(out.depth, z_bck, z_propose, p_sharp_bck_fwd, p_sharp_bck_bck, rho_bck, p_bck_fwd,
                           p_bck_bck, h0, -1.0, out.n_leapfrog, log_sum_weight_subtree, sum_metro_prob,
                           out.divergent);
      }
      if (!valid) break;
      ++out.depth;

      if (log_sum_weight_subtree > log_sum_weight) {
        z_sample = z_propose;
      } else if (unif(rng_) < std::exp(log_sum_weight_subtree - log_sum_weight)) {
        z_sample = z_propose;
      }
      log_sum_weight = log_sum_exp(log_sum_weight, log_sum_weight_subtree);

      rho = rho_bck + rho_fwd;
      bool persist = criterion(p_sharp_bck_bck, p_sharp_fwd_fwd, rho);
      VectorXd rho_ext = rho_bck + p_fwd_bck;
      persist = persist && criterion(p_sharp_bck_bck, p_sharp_fwd_bck, rho_ext);
      rho_ext = rho_fwd + p_bck_fwd;
      persist = persist && criterion(p_sharp_bck_fwd, p_sharp_fwd_fwd, rho_ext);
      if (!persist) break;
    }

    out.accept_stat = out.n_leapfrog > 0 ? sum_metro_prob / out.n_leapfrog : 0.0;
    current = std::move(z_sample);
    return out;
  }

 private:
  double hamiltonian(const PhasePoint& z) const {
    return -z.logp + 0.5 * z.p.dot(inv_metric_.cwiseProduct(z.p));
  }

  void sample_momentum(PhasePoint& z) {
    std::normal_distribution<double> n01(0.0, 1.0);
    z.p.resize(z.q.size());
    for (int i = 0; i < z.p.size(); ++i) z.p[i] = n01(rng_) / std::sqrt(inv_metric_[i]);
  }

  void leapfrog(PhasePoint& z, double eps) const {
    z.p += 0.5 * eps * z.grad;
    z.q += eps * inv_metric_.cwiseProduct(z.p);
    evaluate(z);
    z.p += 0.5 * eps * z.grad;
  }

  static bool criterion(const VectorXd& p_sharp_minus, const VectorXd& p_sharp_plus, const VectorXd& rho) {
    return p_sharp_plus.dot(rho) > 0.0 && p_sharp_minus.dot(rho) > 0.0;
  }

  bool build_tree(int depth, PhasePoint& z, PhasePoint& z_propose, VectorXd& p_sharp_beg, VectorXd& p_sharp_end,
                  VectorXd& rho, VectorXd& p_beg, VectorXd& p_end, double h0, double sign, int& n_leapfrog,
                  double& log_sum_weight, double& sum_metro_prob, bool& divergent) {
    if (depth == 0) {
      leapfrog(z, sign * step_size);
      ++n_leapfrog;
      double h = hamiltonian(z);
      if (std::isnan(h)) h = kInf;
      if (h - h0 > kMaxDeltaH) divergent = true;
      log_sum_weight = log_sum_exp(log_sum_weight, h0 - h);
      sum_metro_prob += h0 - h > 0.0 ? 1.0 : std::exp(h0 - h);
      z_propose = z;
      p_sharp_beg = inv_metric_.cwiseProduct(z.p);
      p_sharp_end = p_sharp_beg;
      rho += z.p;
      p_beg = z.p;
      p_end = p_beg;
      return !divergent;
    }

    const int dim = static_cast<int>(z.q.size());
    double log_sum_weight_init = -kInf;
    VectorXd p_init_end(dim), p_sharp_init_end(dim);
    VectorXd rho_init = VectorXd::Zero(dim);
    if (!build_tree(depth - 1, z, z_propose, p_sharp_beg, p_sharp_init_end, rho_init, p_beg, p_init_end, h0,
                    sign, n_leapfrog, log_sum_weight_init, sum_metro_prob, divergent)) {
      return false;
    }

    PhasePoint z_propose_final = z;
    double log_sum_weight_final = -kInf;
    VectorXd p_final_beg(dim), p_sharp_final_beg(dim);
    VectorXd rho_final = VectorXd::Zero(dim);
    if (!build_tree(depth - 1, z, z_propose_final, p_sharp_final_beg, p_sharp_end, rho_final, p_final_beg, p_end,
                    h0, sign, n_leapfrog, log_sum_weight_final, sum_metro_prob, divergent)) {
      return false;
    }

    const double log_sum_weight_subtree = log_sum_exp(log_sum_weight_init, log_sum_weight_final);
    log_sum_weight = log_sum_exp(log_sum_weight, log_sum_weight_subtree);
    if (log_sum_weight_final > log_sum_weight_subtree) {
      z_propose = z_propose_final;
    } else {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      if (unif(rng_) < std::exp(log_sum_weight_final - log_sum_weight_subtree)) z_propose = z_propose_final;
    }

    const VectorXd rho_subtree = rho_init + rho_final;
    rho += rho_subtree;
    bool persist = criterion(p_sharp_beg, p_sharp_end, rho_subtree);
    VectorXd rho_ext = rho_init + p_final_beg;
    persist = persist && criterion(p_sharp_beg, p_sharp_final_beg, rho_ext);
    rho_ext = rho_final + p_init_end;
    persist = persist && criterion(p_sharp_init_end, p_sharp_end, rho_ext);
    return persist;
  }

  const LogDensity& target_;
  Rng& rng_;
  int max_depth_;
  VectorXd inv_metric_;
};

struct Window {
  int begin;
  int end;  // exclusive
  bool slow;
};

/// Fast initial buffer, doubling slow windows for the metric, fast terminal buffer.
std::vector<Window> warmup_schedule(int warmup) {
  std::vector<Window> windows;
  if (warmup <= 0) return windows;
  int init_buffer = 75, term_buffer = 50, base = 25;
  if (warmup < 20) {
    windows.push_back({0, warmup, false});
    return windows;
  }
  if (init_buffer + base + term_buffer > warmup) {
    init_buffer = static_cast<int>(0.15 * warmup);
    term_buffer = static_cast<int>(0.1 * warmup);
    base = warmup - init_buffer - term_buffer;
  }
  windows.push_back({0, init_buffer, false});
  const int slow_end = warmup - term_buffer;
  int start = init_buffer;
  int size = base;
  while (start < slow_end) {
    int stop = start + size;
    if (stop + 2 * size > slow_end) stop = slow_end;
    windows.push_back({start, stop, true});
    start = stop;
    size *= 2;
  }
  windows.push_back({slow_end, warmup, false});
  return windows;
}

std::vector<double> run_chain(const LogDensity& target, const InitFn& init, int dim, const SamplerConfig& cfg,
                              int chain, ChainInfo& info) {
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(chain));
  Nuts nuts(target, dim, rng, cfg.max_tree_depth);

  PhasePoint z;
  bool found = false;
  for (int attempt = 0; attempt < 100 && !found; ++attempt) {
    z.q = init(rng);
    if (z.q.size() != dim) throw ConfigError("initial point has the wrong dimension");
    z.grad = VectorXd::Zero(dim);
    nuts.evaluate(z);
    found = std::isfinite(z.logp) && z.grad.allFinite();
  }
  if (!found) throw ConfigError("chain " + std::to_string(chain) + ": no finite initial point after 100 attempts");

  nuts.step_size = 1.0;
  nuts.init_step_size(z);
  DualAveraging da;
  da.restart(nuts.step_size);
  VarianceEstimator var(dim);

  const std::vector<Window> schedule = warmup_schedule(cfg.warmup);
  std::size_t w = 0;
  double window_accept = 0.0;

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.draws) * dim);
  double accept_total = 0.0;
  long depth_total = 0;

  const int total = cfg.warmup + cfg.draws;
  for (int it = 0; it < total; ++it) {
    const Nuts::Transition tr = nuts.transition(z);
    info.leapfrog_steps += tr.n_leapfrog;

    if (it < cfg.warmup) {
      nuts.step_size = da.learn(tr.accept_stat, cfg.target_accept);
      window_accept += tr.accept_stat;
      const Window& win = schedule[w];
      if (win.slow) var.add(z.q);
      if (it + 1 == win.end) {
        if (window_accept == 0.0) {
          throw AdaptationError("chain " + std::to_string(chain) + ": every proposal rejected during warmup " +
                                    "iterations [" + std::to_string(win.begin) + ", " + std::to_string(win.end) +
                                    "), step size " + std::to_string(nuts.step_size),
                                chain, win.begin, win.end, nuts.step_size);
        }
        window_accept = 0.0;
        if (win.slow) {
          nuts.set_inv_metric(var.regularized_variance());
          var.restart();
          nuts.init_step_size(z);
          da.restart(nuts.step_size);
        }
        ++w;
      }
      if (it + 1 == cfg.warmup) nuts.step_size = da.final_step_size();
    } else {
      if (tr.divergent) ++info.divergences;
      accept_total += tr.accept_stat;
      depth_total += tr.depth;
      out.insert(out.end(), z.q.data(), z.q.data() + dim);
    }
  }
  info.step_size = nuts.step_size;
  info.inv_metric.assign(nuts.inv_metric().data(), nuts.inv_metric().data() + dim);
  info.mean_accept = cfg.draws > 0 ? accept_total / cfg.draws : 0.0;
  info.mean_tree_depth = cfg.draws > 0 ? static_cast<double>(depth_total) / cfg.draws : 0.0;
  return out;
}

/// Halves each chain (dropping the middle value of odd-length chains).
std::vector<std::vector<double>> split_chains(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    out.emplace_back(c.begin(), c.begin() + half);
    out.emplace_back(c.end() - half, c.end());
  }
  return out;
}

bool all_identical(const std::vector<std::vector<double>>& chains) {
  const double first = chains.front().front();
  for (const auto& c : chains)
    for (double x : c)
      if (x != first) return false;
  return true;
}

}  // namespace

void SamplerConfig::validate(bool for_diagnostics) const {
  if (algorithm != "nuts") throw ConfigError("unsupported sampler algorithm '" + algorithm + "' (expected nuts)");
  if (chains < 1) throw ConfigError("chains must be at least 1");
  if (for_diagnostics && chains < 2) throw ConfigError("convergence diagnostics need at least 2 chains");
  if (warmup < 0) throw ConfigError("warmup must be nonnegative");
  if (draws < 1) throw ConfigError("draws must be at least 1");
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw ConfigError("target_accept must lie in (0, 1)");
  if (max_tree_depth < 1 || max_tree_depth > 20) throw ConfigError("max_tree_depth must lie in 1..20");
}

int PosteriorDraws::column_index(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("no column named '" + name + "' in the draws");
  return static_cast<int>(it - names.begin());
}

std::vector<double> PosteriorDraws::column(int j) const {
  std::vector<double> out(static_cast<std::size_t>(rows()));
  for (int i = 0; i < rows(); ++i) out[i] = at(i, j);
  return out;
}

PosteriorDraws run_sampler(const LogDensity& target, const InitFn& init, std::vector<std::string> names,
                           const SamplerConfig& cfg) {
  cfg.validate(false);
  const int dim = static_cast<int>(names.size());
  std::vector<std::vector<double>> per_chain(cfg.chains);
  std::vector<ChainInfo> info(cfg.chains);
  std::vector<std::exception_ptr> errors(cfg.chains);
  {
    std::vector<std::jthread> workers;
    for (int c = 0; c < cfg.chains; ++c) {
      workers.emplace_back([&, c] {
        try {
          per_chain[c] = run_chain(target, init, dim, cfg, c, info[c]);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  PosteriorDraws draws;
  draws.names = std::move(names);
  draws.chains = cfg.chains;
  draws.draws_per_chain = cfg.draws;
  draws.seed = cfg.seed;
  draws.config = cfg;
  draws.chain_info = std::move(info);
  for (auto& c : per_chain) draws.values.insert(draws.values.end(), c.begin(), c.end());
  return draws;
}

std::optional<double> split_rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.empty() || chains.front().size() < 4) throw DomainError("R-hat needs chains of length >= 4");
  if (all_identical(chains)) return std::nullopt;
  const auto halves = split_chains(chains);
  const double m = static_cast<double>(halves.size());
  const double n = static_cast<double>(halves.front().size());
  std::vector<double> means, vars;
  for (const auto& h : halves) {
    means.push_back(mean(h));
    const double sd = sample_sd(h);
    vars.push_back(sd * sd);
  }
  const double w = mean(vars);
  const double grand = mean(means);
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= n / (m - 1.0);
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

std::optional<double> effective_sample_size(const std::vector<std::vector<double>>& chains) {
  if (chains.empty() || chains.front().size() < 4) throw DomainError("ESS needs chains of length >= 4");
  if (all_identical(chains)) return std::nullopt;
  const auto halves = split_chains(chains);
  const std::size_t m = halves.size();
  const std::size_t n = halves.front().size();

  std::vector<double> chain_mean(m), chain_var(m);
  for (std::size_t c = 0; c < m; ++c) {
    chain_mean[c] = mean(halves[c]);
    double ss = 0.0;
    for (double x : halves[c]) ss += (x - chain_mean[c]) * (x - chain_mean[c]);
    chain_var[c] = ss / (static_cast<double>(n) - 1.0);
  }
  const double mean_var = mean(chain_var);
  double var_plus = mean_var * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
  if (m > 1) {
    const double sd_means = sample_sd(chain_mean);
    var_plus += sd_means * sd_means;
  }
  if (var_plus == 0.0) return std::nullopt;

  // autocovariance at lag t, averaged over chains (biased estimator, / n)
  auto mean_acov = [&](std::size_t lag) {
    double total = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const auto& x = halves[c];
      double s = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - chain_mean[c]) * (x[i + lag] - chain_mean[c]);
      total += s / static_cast<double>(n);
    }
    return total / static_cast<double>(m);
  };
  auto rho_hat = [&](std::size_t lag) { return 1.0 - (mean_var - mean_acov(lag)) / var_plus; };

  // Geyer initial positive sequence with monotone enforcement
  std::vector<double> rho;
  rho.push_back(1.0);
  rho.push_back(rho_hat(1));
  double pair_prev = rho[0] + rho[1];
  double sum_pairs = pair_prev;
  std::size_t t = 2;
  while (t + 1 < n) {
    const double r0 = rho_hat(t);
    const double r1 = rho_hat(t + 1);
    double pair = r0 + r1;
    if (!(pair > 0.0)) break;
    if (pair > pair_prev) pair = pair_prev;
    sum_pairs += pair;
    pair_prev = pair;
    t += 2;
  }
  const double tau = std::max(-1.0 + 2.0 * sum_pairs, 1.0 / std::log10(static_cast<double>(m * n)));
  return static_cast<double>(m * n) / tau;
}

Diagnostics diagnose(const PosteriorDraws& draws) {
  if (draws.chains < 2) throw DomainError("diagnostics need at least 2 chains");
  Diagnostics out;
  out.max_rhat = 1.0;
  out.min_ess = std::numeric_limits<double>::infinity();
  for (int j = 0; j < draws.dim(); ++j) {
    std::vector<std::vector<double>> chains(draws.chains);
    for (int i = 0; i < draws.rows(); ++i) chains[draws.chain_of(i)].push_back(draws.at(i, j));
    ParamDiagnostic d;
    d.name = draws.names[j];
    d.rhat = split_rhat(chains);
    if (d.rhat) {
      d.ess = effective_sample_size(chains);
      out.max_rhat = std::max(out.max_rhat, *d.rhat);
      if (d.ess) out.min_ess = std::min(out.min_ess, *d.ess);
    } else {
      d.degenerate = true;
    }
    out.params.push_back(std::move(d));
  }
  if (!std::isfinite(out.min_ess)) out.min_ess = 0.0;
  out.converged = out.max_rhat <= kRhatThreshold && out.min_ess >= kEssThreshold;
  return out;
}

std::vector<NamedSummary> summarize(const PosteriorDraws& draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("summary level must lie in (0, 1)");
  if (draws.rows() < 100) throw DomainError("summaries need at least 100 draws");
  std::vector<NamedSummary> out;
  for (int j = 0; j < draws.dim(); ++j) out.push_back({draws.names[j], summarize_values(draws.column(j), level)});
  return out;
}

}  // namespace relscm
