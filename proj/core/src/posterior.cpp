#include "relscm/posterior.hpp"

#include <cmath>
#include <limits>

#include "relscm/densities.hpp"
#include "relscm/errors.hpp"
#include "relscm/structural.hpp"

namespace relscm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double>& target(ModelParams& t, const ParamLayout::Segment& s) {
  return s.vec ? t.*(s.vec) : (t.*(s.table))[s.row];
}

const std::vector<double>& target(const ModelParams& t, const ParamLayout::Segment& s) {
  return s.vec ? t.*(s.vec) : (t.*(s.table))[s.row];
}

/// Gradient container: ModelParams shape, every entry zero.
ModelParams zero_like(const Cardinalities& card) {
  ModelParams d = ModelParams::zeros(card);
  d.mu0 = 0.0;
  d.sigma0 = 0.0;
  d.sigmaY = 0.0;
  std::fill(d.pi_H.begin(), d.pi_H.end(), 0.0);
  std::fill(d.pi_P.begin(), d.pi_P.end(), 0.0);
  for (auto& row : d.pi_S) std::fill(row.begin(), row.end(), 0.0);
  for (auto& row : d.pi_T) std::fill(row.begin(), row.end(), 0.0);
  return d;
}

double log1p_exp(double a) { return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a)); }

double inv_logit(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

// Stick-breaking: K-simplex from K-1 unconstrained coordinates, centred so
// that y = 0 maps to the uniform simplex.
double stick_forward(const double* y, std::vector<double>& x) {
  const int K = static_cast<int>(x.size());
  double stick = 1.0;
  double log_jac = 0.0;
  for (int k = 0; k < K - 1; ++k) {
    const double adj = y[k] - std::log(static_cast<double>(K - 1 - k));
    const double z = inv_logit(adj);
    x[k] = stick * z;
    log_jac += std::log(stick) - log1p_exp(-adj) - log1p_exp(adj);
    stick -= x[k];
  }
  x[K - 1] = stick;
  return log_jac;
}

void stick_inverse(const std::vector<double>& x, double* y) {
  const int K = static_cast<int>(x.size());
  double stick = 1.0;
  for (int k = 0; k < K - 1; ++k) {
    const double z = x[k] / stick;
    y[k] = std::log(z) - std::log1p(-z) + std::log(static_cast<double>(K - 1 - k));
    stick -= x[k];
  }
}

void stick_backward(const double* y, const std::vector<double>& gx, double* gy) {
  const int K = static_cast<int>(gx.size());
  std::vector<double> z(K - 1), stick(K);
  stick[0] = 1.0;
  for (int k = 0; k < K - 1; ++k) {
    z[k] = inv_logit(y[k] - std::log(static_cast<double>(K - 1 - k)));
    stick[k + 1] = stick[k] * (1.0 - z[k]);
  }
  double g_next = gx[K - 1];  // adjoint of stick[k + 1]
  for (int k = K - 2; k >= 0; --k) {
    const double zk = z[k];
    gy[k] += (gx[k] - g_next) * stick[k] * zk * (1.0 - zk) + (1.0 - zk) - zk;
    g_next = gx[k] * zk + g_next * (1.0 - zk) + 1.0 / stick[k];
  }
}

double prior_terms(const ParamLayout& layout, const ModelParams& theta, ModelParams* d) {
  const FitSpec& spec = layout.spec();
  const double df = spec.priors.df;
  double lp = 0.0;
  for (const auto& seg : layout.segments()) {
    switch (seg.kind) {
      case ParamLayout::Kind::Real: {
        const double x = theta.*(seg.scalar);
        lp += density::student_t_lpdf(x, df, seg.prior_location, seg.prior_scale);
        if (d) (*d).*(seg.scalar) += density::student_t_dlpdf(x, df, seg.prior_location, seg.prior_scale);
        break;
      }
      case ParamLayout::Kind::SumToZero: {
        const auto& x = target(theta, seg);
        for (int i = 0; i < seg.length; ++i) {
          lp += density::student_t_lpdf(x[i], df, 0.0, seg.prior_scale);
          if (d) target(*d, seg)[i] += density::student_t_dlpdf(x[i], df, 0.0, seg.prior_scale);
        }
        break;
      }
      case ParamLayout::Kind::LogPositive: {
        const double x = theta.*(seg.scalar);
        lp += density::half_student_t_lpdf(x, df, seg.prior_scale);
        if (d) (*d).*(seg.scalar) += density::student_t_dlpdf(x, df, 0.0, seg.prior_scale);
        break;
      }
      case ParamLayout::Kind::Simplex: {
        const auto& x = target(theta, seg);
        std::vector<double> lambda;
        if (seg.table == &ModelParams::pi_S) {
          lambda = spec.lambda_S(seg.row);
        } else if (seg.table == &ModelParams::pi_T) {
          lambda = spec.lambda_T(seg.row);
        } else if (seg.vec == &ModelParams::pi_H) {
          lambda = spec.lambda_H();
        } else {
          lambda = spec.lambda_P();
        }
        lp += density::dirichlet_lpdf(x, lambda);
        if (d) {
          auto& g = target(*d, seg);
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (lambda[i] != 1.0) g[i] += (lambda[i] - 1.0) / x[i];
          }
        }
        break;
      }
    }
  }
  return lp;
}

std::size_t cell_index(const Configuration& c, const Cardinalities& card) {
  return ((static_cast<std::size_t>(c.x_S - 1) * card.n_T + (c.x_T - 1)) * card.n_P + (c.x_P - 1)) *
             Cardinalities::n_H +
         (c.h_level() - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// FitSpec

FitSpec FitSpec::for_regime(Regime regime, const Cardinalities& card, const FixedConstants& constants) {
  FitSpec spec;
  spec.regime = regime;
  spec.card = card;
  spec.constants = constants;
  spec.cubic_active = regime == Regime::AS;
  spec.probabilities_active = regime == Regime::NS;
  return spec;
}

void FitSpec::validate() const {
  constants.validate();
  if (card.n_S < 2 || card.n_T < 2 || card.n_P < 2) throw ConfigError("every factor needs at least two levels");
  if (regime == Regime::AS && probabilities_active) {
    throw ConfigError("AS fits must not activate the probability tables");
  }
  if (regime == Regime::NS && !probabilities_active) {
    throw ConfigError("NS fits must activate the probability tables");
  }
  const PriorHyper& p = priors;
  if (!(p.df > 0 && p.effect_scale > 0 && p.beta_scale > 0 && p.mu0_scale > 0 && p.sigma_scale > 0)) {
    throw ConfigError("prior degrees of freedom and scales must be positive");
  }
  auto check_lambda = [](const std::vector<double>& l, int n, const char* name) {
    if (l.empty()) return;
    if (static_cast<int>(l.size()) != n) throw ConfigError(std::string(name) + ": wrong length");
    for (double x : l) {
      if (!(x > 0.0)) throw ConfigError(std::string(name) + ": entries must be positive");
    }
  };
  check_lambda(p.lambda_H, Cardinalities::n_H, "lambda_H");
  check_lambda(p.lambda_P, card.n_P, "lambda_P");
  for (const auto& [table, n, name] :
       {std::tuple{&p.lambda_S, card.n_S, "lambda_S"}, std::tuple{&p.lambda_T, card.n_T, "lambda_T"}}) {
    if (table->empty()) continue;
    if (table->size() != static_cast<std::size_t>(Cardinalities::n_H)) {
      throw ConfigError(std::string(name) + ": expected one row per humidity level");
    }
    for (const auto& row : *table) check_lambda(row, n, name);
  }
}

std::vector<double> FitSpec::lambda_H() const {
  return priors.lambda_H.empty() ? std::vector<double>(Cardinalities::n_H, 1.0) : priors.lambda_H;
}
std::vector<double> FitSpec::lambda_P() const {
  return priors.lambda_P.empty() ? std::vector<double>(card.n_P, 1.0) : priors.lambda_P;
}
std::vector<double> FitSpec::lambda_S(int h) const {
  return priors.lambda_S.empty() ? std::vector<double>(card.n_S, 1.0) : priors.lambda_S[h];
}
std::vector<double> FitSpec::lambda_T(int h) const {
  return priors.lambda_T.empty() ? std::vector<double>(card.n_T, 1.0) : priors.lambda_T[h];
}

// ---------------------------------------------------------------------------
// Term-by-term likelihood and prior

double log_likelihood(const ModelParams& theta, std::span<const DeviceRecord> data, Regime regime,
                      const FixedConstants& c) {
  if (data.empty()) throw DataError("dataset is empty");
  if (!(theta.sigma0 > 0.0) || !(theta.sigmaY > 0.0)) throw DomainError("noise scales must be positive");
  const Cardinalities card = theta.cardinalities();
  double ll = 0.0;
  for (const auto& rec : data) {
    if (rec.regime != regime) throw DataError("device " + rec.id + ": regime does not match the fit");
    rec.validate();
    validate(rec.config, card);
    const double y0 = rec.y(0);
    ll += density::normal_lpdf(y0, mean_y0(rec.config, theta), theta.sigma0);
    for (int t = 1; t <= 3; ++t) {
      if (!rec.has(t)) continue;
      ll += density::normal_lpdf(rec.y(t), mean_yt(y0, rec.config, rec.w(t), regime, theta, c),
                                 theta.sigmaY);
    }
    if (regime == Regime::NS) {
      const int h = rec.config.h_level() - 1;
      ll += std::log(theta.pi_H[h]) + std::log(theta.pi_P[rec.config.x_P - 1]) +
            std::log(theta.pi_S[h][rec.config.x_S - 1]) + std::log(theta.pi_T[h][rec.config.x_T - 1]);
    }
  }
  if (!std::isfinite(ll)) throw NonFiniteError("log-likelihood is not finite");
  return ll;
}

double log_prior(const ModelParams& theta, const FitSpec& spec) {
  if (!(theta.sigma0 > 0.0) || !(theta.sigmaY > 0.0)) throw DomainError("noise scales must be positive");
  const double lp = prior_terms(ParamLayout(spec), theta, nullptr);
  if (!std::isfinite(lp)) throw NonFiniteError("log-prior is not finite");
  return lp;
}

double log_prior_with_gradient(const ModelParams& theta, const FitSpec& spec, ModelParams* dtheta) {
  return prior_terms(ParamLayout(spec), theta, dtheta);
}

// ---------------------------------------------------------------------------
// ParamLayout

ParamLayout::ParamLayout(const FitSpec& spec) : spec_(spec) {
  spec_.validate();
  const Cardinalities& card = spec_.card;
  const PriorHyper& pr = spec_.priors;
  auto add = [&](Segment s) {
    s.offset = dim_;
    dim_ += s.length;
    switch (s.kind) {
      case Kind::Real: names_.push_back(s.name); break;
      case Kind::LogPositive: names_.push_back("log_" + s.name); break;
      case Kind::SumToZero:
        for (int i = 1; i <= s.length; ++i) names_.push_back(s.name + ".free[" + std::to_string(i) + "]");
        break;
      case Kind::Simplex:
        for (int i = 1; i <= s.length; ++i) names_.push_back(s.name + ".stick[" + std::to_string(i) + "]");
        break;
    }
    segments_.push_back(std::move(s));
  };
  auto real = [&](const char* name, double ModelParams::*m, double loc, double scale) {
    Segment s{Kind::Real, name, 0, 1};
    s.scalar = m;
    s.prior_location = loc;
    s.prior_scale = scale;
    add(s);
  };
  auto zero_sum = [&](const char* name, std::vector<double> ModelParams::*m, int n) {
    Segment s{Kind::SumToZero, name, 0, n - 1};
    s.vec = m;
    s.prior_scale = pr.effect_scale;
    add(s);
  };
  real("mu0", &ModelParams::mu0, pr.mu0_location, pr.mu0_scale);
  zero_sum("alpha_S", &ModelParams::alpha_S, card.n_S);
  zero_sum("alpha_T", &ModelParams::alpha_T, card.n_T);
  zero_sum("alpha_P", &ModelParams::alpha_P, card.n_P);
  real("beta1", &ModelParams::beta1, 0.0, pr.beta_scale);
  zero_sum("delta1_S", &ModelParams::delta1_S, card.n_S);
  zero_sum("delta1_T", &ModelParams::delta1_T, card.n_T);
  zero_sum("delta1_P", &ModelParams::delta1_P, card.n_P);
  zero_sum("delta1_H", &ModelParams::delta1_H, Cardinalities::n_H);
  if (spec_.cubic_active) {
    real("beta2", &ModelParams::beta2, 0.0, pr.beta_scale);
    zero_sum("delta2_S", &ModelParams::delta2_S, card.n_S);
    zero_sum("delta2_T", &ModelParams::delta2_T, card.n_T);
    zero_sum("delta2_P", &ModelParams::delta2_P, card.n_P);
    zero_sum("delta2_H", &ModelParams::delta2_H, Cardinalities::n_H);
  }
  for (auto [name, m] : {std::pair{"sigma0", &ModelParams::sigma0}, std::pair{"sigmaY", &ModelParams::sigmaY}}) {
    Segment s{Kind::LogPositive, name, 0, 1};
    s.scalar = m;
    s.prior_scale = pr.sigma_scale;
    add(s);
  }
  if (spec_.probabilities_active) {
    Segment h{Kind::Simplex, "pi_H", 0, Cardinalities::n_H - 1};
    h.vec = &ModelParams::pi_H;
    add(h);
    Segment p{Kind::Simplex, "pi_P", 0, card.n_P - 1};
    p.vec = &ModelParams::pi_P;
    add(p);
    for (int r = 0; r < Cardinalities::n_H; ++r) {
      Segment s{Kind::Simplex, "pi_S[" + std::to_string(r + 1) + "]", 0, card.n_S - 1};
      s.table = &ModelParams::pi_S;
      s.row = r;
      add(s);
    }
    for (int r = 0; r < Cardinalities::n_H; ++r) {
      Segment s{Kind::Simplex, "pi_T[" + std::to_string(r + 1) + "]", 0, card.n_T - 1};
      s.table = &ModelParams::pi_T;
      s.row = r;
      add(s);
    }
  }
}

int ParamLayout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  throw ConfigError("unknown unconstrained coordinate '" + std::string(name) + "'");
}

ModelParams ParamLayout::constrain(const Eigen::VectorXd& v, double* log_jacobian) const {
  if (v.size() != dim_) throw ConfigError("unconstrained vector has the wrong dimension");
  ModelParams t = ModelParams::zeros(spec_.card);
  double lj = 0.0;
  for (const auto& seg : segments_) {
    const double* y = v.data() + seg.offset;
    switch (seg.kind) {
      case Kind::Real: t.*(seg.scalar) = y[0]; break;
      case Kind::SumToZero: {
        auto& x = target(t, seg);
        double sum = 0.0;
        for (int i = 0; i < seg.length; ++i) {
          x[i] = y[i];
          sum += y[i];
        }
        x[seg.length] = -sum;
        break;
      }
      case Kind::LogPositive:
        t.*(seg.scalar) = std::exp(y[0]);
        lj += y[0];
        break;
      case Kind::Simplex: lj += stick_forward(y, target(t, seg)); break;
    }
  }
  if (log_jacobian) *log_jacobian = lj;
  return t;
}

Eigen::VectorXd ParamLayout::unconstrain(const ModelParams& theta) const {
  if (theta.cardinalities() != spec_.card) throw ConfigError("parameter cardinalities do not match the layout");
  Eigen::VectorXd v(dim_);
  for (const auto& seg : segments_) {
    double* y = v.data() + seg.offset;
    switch (seg.kind) {
      case Kind::Real: y[0] = theta.*(seg.scalar); break;
      case Kind::SumToZero: {
        const auto& x = target(theta, seg);
        for (int i = 0; i < seg.length; ++i) y[i] = x[i];
        break;
      }
      case Kind::LogPositive: y[0] = std::log(theta.*(seg.scalar)); break;
      case Kind::Simplex: stick_inverse(target(theta, seg), y); break;
    }
  }
  return v;
}

void ParamLayout::backprop(const Eigen::VectorXd& v, const ModelParams& d, Eigen::VectorXd& grad) const {
  for (const auto& seg : segments_) {
    const double* y = v.data() + seg.offset;
    double* g = grad.data() + seg.offset;
    switch (seg.kind) {
      case Kind::Real: g[0] += d.*(seg.scalar); break;
      case Kind::SumToZero: {
        const auto& gx = target(d, seg);
        for (int i = 0; i < seg.length; ++i) g[i] += gx[i] - gx[seg.length];
        break;
      }
      case Kind::LogPositive: g[0] += d.*(seg.scalar) * std::exp(y[0]) + 1.0; break;
      case Kind::Simplex: stick_backward(y, target(d, seg), g); break;
    }
  }
}

// ---------------------------------------------------------------------------
// SufficientStats

SufficientStats::SufficientStats(std::span<const DeviceRecord> data, Regime regime, const FixedConstants& c,
                                 const Cardinalities& card)
    : card_(card),
      cells_(static_cast<std::size_t>(card.cells())),
      count_H_(Cardinalities::n_H, 0.0),
      count_P_(card.n_P, 0.0),
      count_S_(Cardinalities::n_H, std::vector<double>(card.n_S, 0.0)),
      count_T_(Cardinalities::n_H, std::vector<double>(card.n_T, 0.0)) {
  if (data.empty()) throw DataError("dataset is empty");
  double y0_total = 0.0;
  for (const auto& rec : data) {
    if (rec.regime != regime) throw DataError("device " + rec.id + ": regime does not match the fit");
    rec.validate();
    validate(rec.config, card);
    Cell& cell = cells_[cell_index(rec.config, card)];
    const double y0 = rec.y(0);
    cell.n0 += 1.0;
    cell.y0_mean += y0;
    y0_total += y0;
    for (int t = 1; t <= 3; ++t) {
      if (!rec.has(t)) continue;
      const double d = rec.y(t) - y0;
      const double tt = time_transform(rec.w(t), regime, c);
      const double cb = knot_basis(rec.w(t), regime, c);
      cell.nt += 1.0;
      cell.dd += d * d;
      cell.td += tt * d;
      cell.cd += cb * d;
      cell.tt += tt * tt;
      cell.tc += tt * cb;
      cell.cc += cb * cb;
    }
    const int h = rec.config.h_level() - 1;
    count_H_[h] += 1.0;
    count_P_[rec.config.x_P - 1] += 1.0;
    count_S_[h][rec.config.x_S - 1] += 1.0;
    count_T_[h][rec.config.x_T - 1] += 1.0;
  }
  for (auto& cell : cells_) {
    if (cell.n0 > 0) cell.y0_mean /= cell.n0;
  }
  for (const auto& rec : data) {
    Cell& cell = cells_[cell_index(rec.config, card)];
    const double dev = rec.y(0) - cell.y0_mean;
    cell.y0_ss += dev * dev;
  }
  devices_ = static_cast<int>(data.size());
  mean_y0_ = y0_total / static_cast<double>(data.size());
}

double SufficientStats::log_likelihood(const ModelParams& th, bool include_categorical, ModelParams* d) const {
  const double s0 = th.sigma0;
  const double sy = th.sigmaY;
  const double log_s0 = std::log(s0);
  const double log_sy = std::log(sy);
  const double inv0 = 1.0 / (s0 * s0);
  const double invy = 1.0 / (sy * sy);
  double ll = 0.0;
  double g_s0 = 0.0;
  double g_sy = 0.0;
  std::size_t k = 0;
  for (int s = 0; s < card_.n_S; ++s) {
    for (int t = 0; t < card_.n_T; ++t) {
      for (int p = 0; p < card_.n_P; ++p) {
        const double m = th.mu0 + th.alpha_S[s] + th.alpha_T[t] + th.alpha_P[p];
        const double sl_base = th.beta1 + th.delta1_S[s] + th.delta1_T[t] + th.delta1_P[p];
        const double cu_base = th.beta2 + th.delta2_S[s] + th.delta2_T[t] + th.delta2_P[p];
        for (int h = 0; h < Cardinalities::n_H; ++h, ++k) {
          const Cell& cell = cells_[k];
          if (cell.n0 > 0) {
            const double dev = cell.y0_mean - m;
            const double q = cell.y0_ss + cell.n0 * dev * dev;
            ll += -cell.n0 * (log_s0 + density::kHalfLog2Pi) - 0.5 * q * inv0;
            if (d) {
              const double gm = cell.n0 * dev * inv0;
              d->mu0 += gm;
              d->alpha_S[s] += gm;
              d->alpha_T[t] += gm;
              d->alpha_P[p] += gm;
              g_s0 += -cell.n0 / s0 + q * inv0 / s0;
            }
          }
          if (cell.nt > 0) {
            const double sl = sl_base + th.delta1_H[h];
            const double cu = cu_base + th.delta2_H[h];
            const double rss = cell.dd - 2.0 * (sl * cell.td + cu * cell.cd) + sl * sl * cell.tt +
                               2.0 * sl * cu * cell.tc + cu * cu * cell.cc;
            ll += -cell.nt * (log_sy + density::kHalfLog2Pi) - 0.5 * rss * invy;
            if (d) {
              const double gs = (cell.td - sl * cell.tt - cu * cell.tc) * invy;
              d->beta1 += gs;
              d->delta1_S[s] += gs;
              d->delta1_T[t] += gs;
              d->delta1_P[p] += gs;
              d->delta1_H[h] += gs;
              if (cell.cc > 0.0) {
                const double gc = (cell.cd - sl * cell.tc - cu * cell.cc) * invy;
                d->beta2 += gc;
                d->delta2_S[s] += gc;
                d->delta2_T[t] += gc;
                d->delta2_P[p] += gc;
                d->delta2_H[h] += gc;
              }
              g_sy += -cell.nt / sy + rss * invy / sy;
            }
          }
        }
      }
    }
  }
  if (d) {
    d->sigma0 += g_s0;
    d->sigmaY += g_sy;
  }
  if (include_categorical) {
    auto add = [&](const std::vector<double>& counts, const std::vector<double>& probs, std::vector<double>* g) {
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0.0) continue;
        ll += counts[i] * std::log(probs[i]);
        if (g) (*g)[i] += counts[i] / probs[i];
      }
    };
    add(count_H_, th.pi_H, d ? &d->pi_H : nullptr);
    add(count_P_, th.pi_P, d ? &d->pi_P : nullptr);
    for (int h = 0; h < Cardinalities::n_H; ++h) {
      add(count_S_[h], th.pi_S[h], d ? &d->pi_S[h] : nullptr);
      add(count_T_[h], th.pi_T[h], d ? &d->pi_T[h] : nullptr);
    }
  }
  return ll;
}

// ---------------------------------------------------------------------------
// LogPosterior

LogPosterior::LogPosterior(std::span<const DeviceRecord> data, FitSpec spec)
    : layout_(spec), stats_(data, spec.regime, spec.constants, spec.card) {}

double LogPosterior::operator()(const Eigen::VectorXd& v) const { return evaluate(v, nullptr); }

double LogPosterior::operator()(const Eigen::VectorXd& v, Eigen::VectorXd& grad) const {
  return evaluate(v, &grad);
}

double LogPosterior::log_likelihood(const ModelParams& theta) const {
  return stats_.log_likelihood(theta, spec().regime == Regime::NS, nullptr);
}

double LogPosterior::evaluate(const Eigen::VectorXd& v, Eigen::VectorXd* grad) const {
  if (grad) grad->setZero(layout_.dim());
  if (v.size() != layout_.dim() || !v.allFinite()) return kNegInf;
  double log_jac = 0.0;
  const ModelParams theta = layout_.constrain(v, &log_jac);
  if (!(theta.sigma0 > 0.0) || !(theta.sigmaY > 0.0) || !std::isfinite(theta.sigma0) ||
      !std::isfinite(theta.sigmaY)) {
    return kNegInf;
  }
  ModelParams d;
  if (grad) d = zero_like(spec().card);
  double lp = prior_terms(layout_, theta, grad ? &d : nullptr);
  lp += stats_.log_likelihood(theta, spec().regime == Regime::NS, grad ? &d : nullptr);
  lp += log_jac;
  if (!std::isfinite(lp)) {
    if (grad) grad->setZero();
    return kNegInf;
  }
  if (grad) {
    layout_.backprop(v, d, *grad);
    if (!grad->allFinite()) {
      grad->setZero();
      return kNegInf;
    }
  }
  return lp;
}

Eigen::VectorXd LogPosterior::initial_point(Rng& rng) const {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Eigen::VectorXd v(layout_.dim());
  for (int i = 0; i < v.size(); ++i) v[i] = unif(rng);
  v[layout_.index_of("mu0")] = stats_.mean_y0();
  return v;
}

}  // namespace relscm
