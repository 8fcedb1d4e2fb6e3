#include "relscm/types.hpp"

#include <cmath>
#include <numeric>

#include "relscm/errors.hpp"

namespace relscm {

namespace {

void check_sum_to_zero(const std::vector<double>& v, int expected, const char* name) {
  if (static_cast<int>(v.size()) != expected) {
    throw ConfigError(std::string(name) + ": expected " + std::to_string(expected) +
                      " entries, got " + std::to_string(v.size()));
  }
  double sum = 0.0;
  double scale = 1.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw ConfigError(std::string(name) + ": non-finite entry");
    sum += x;
    scale = std::max(scale, std::abs(x));
  }
  if (std::abs(sum) > 1e-12 * scale * static_cast<double>(v.size())) {
    throw ConfigError(std::string(name) + ": entries must sum to zero");
  }
}

void check_simplex(const std::vector<double>& v, int expected, const std::string& name) {
  if (static_cast<int>(v.size()) != expected) {
    throw ConfigError(name + ": expected " + std::to_string(expected) + " entries, got " +
                      std::to_string(v.size()));
  }
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError(name + ": negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12 * static_cast<double>(v.size())) {
    throw ConfigError(name + ": probabilities must sum to one");
  }
}

void check_table(const std::vector<std::vector<double>>& table, int cols, const char* name) {
  if (table.size() != static_cast<std::size_t>(Cardinalities::n_H)) {
    throw ConfigError(std::string(name) + ": expected one row per humidity level");
  }
  for (std::size_t r = 0; r < table.size(); ++r) {
    check_simplex(table[r], cols, std::string(name) + "[" + std::to_string(r + 1) + "]");
  }
}

}  // namespace

std::string_view to_string(Regime regime) { return regime == Regime::NS ? "NS" : "AS"; }

Regime parse_regime(std::string_view text) {
  if (text == "NS" || text == "a1") return Regime::NS;
  if (text == "AS" || text == "a2") return Regime::AS;
  throw ConfigError("unknown regime '" + std::string(text) + "' (expected NS or AS)");
}

int humidity_level(int humidity_class) {
  if (humidity_class == -1) return 1;
  if (humidity_class == 1) return 2;
  throw CardinalityError("humidity class must be -1 or +1, got " + std::to_string(humidity_class));
}

int humidity_class(int level) {
  if (level == 1) return -1;
  if (level == 2) return 1;
  throw CardinalityError("humidity level must be 1 or 2, got " + std::to_string(level));
}

void validate(const Configuration& config, const Cardinalities& card) {
  auto check = [](int level, int n, const char* name) {
    if (level < 1 || level > n) {
      throw CardinalityError(std::string(name) + " level " + std::to_string(level) +
                             " outside 1.." + std::to_string(n));
    }
  };
  check(config.x_S, card.n_S, "x_S");
  check(config.x_T, card.n_T, "x_T");
  check(config.x_P, card.n_P, "x_P");
  humidity_level(config.x_H);
}

void FixedConstants::validate() const {
  if (!(psi > 0.0)) throw ConfigError("psi must be positive");
  if (!(tau >= 1.0)) throw ConfigError("tau must be at least 1");
  if (!(gamma >= 1.0)) throw ConfigError("gamma must be at least 1");
  if (!(threshold_factor > 1.0)) throw ConfigError("threshold_factor must exceed 1");
  if (!(nominal_times[0] > 0.0 && nominal_times[0] < nominal_times[1] &&
        nominal_times[1] < nominal_times[2])) {
    throw ConfigError("nominal_times must be positive and strictly increasing");
  }
}

ModelParams ModelParams::zeros(const Cardinalities& card) {
  ModelParams p;
  p.mu0 = 1000.0;
  p.alpha_S.assign(card.n_S, 0.0);
  p.alpha_T.assign(card.n_T, 0.0);
  p.alpha_P.assign(card.n_P, 0.0);
  p.delta1_S.assign(card.n_S, 0.0);
  p.delta1_T.assign(card.n_T, 0.0);
  p.delta1_P.assign(card.n_P, 0.0);
  p.delta1_H.assign(Cardinalities::n_H, 0.0);
  p.delta2_S = p.delta1_S;
  p.delta2_T = p.delta1_T;
  p.delta2_P = p.delta1_P;
  p.delta2_H = p.delta1_H;
  p.pi_H.assign(Cardinalities::n_H, 1.0 / Cardinalities::n_H);
  p.pi_P.assign(card.n_P, 1.0 / card.n_P);
  p.pi_S.assign(Cardinalities::n_H, std::vector<double>(card.n_S, 1.0 / card.n_S));
  p.pi_T.assign(Cardinalities::n_H, std::vector<double>(card.n_T, 1.0 / card.n_T));
  return p;
}

Cardinalities ModelParams::cardinalities() const {
  return {static_cast<int>(alpha_S.size()), static_cast<int>(alpha_T.size()),
          static_cast<int>(alpha_P.size())};
}

void ModelParams::validate() const {
  const Cardinalities card = cardinalities();
  if (card.n_S < 2 || card.n_T < 2 || card.n_P < 2) {
    throw ConfigError("every factor needs at least two levels");
  }
  if (!std::isfinite(mu0) || !std::isfinite(beta1) || !std::isfinite(beta2)) {
    throw ConfigError("mu0, beta1 and beta2 must be finite");
  }
  check_sum_to_zero(alpha_S, card.n_S, "alpha_S");
  check_sum_to_zero(alpha_T, card.n_T, "alpha_T");
  check_sum_to_zero(alpha_P, card.n_P, "alpha_P");
  check_sum_to_zero(delta1_S, card.n_S, "delta1_S");
  check_sum_to_zero(delta1_T, card.n_T, "delta1_T");
  check_sum_to_zero(delta1_P, card.n_P, "delta1_P");
  check_sum_to_zero(delta1_H, Cardinalities::n_H, "delta1_H");
  check_sum_to_zero(delta2_S, card.n_S, "delta2_S");
  check_sum_to_zero(delta2_T, card.n_T, "delta2_T");
  check_sum_to_zero(delta2_P, card.n_P, "delta2_P");
  check_sum_to_zero(delta2_H, Cardinalities::n_H, "delta2_H");
  // zero scales give the noiseless limit used by the generator
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) throw ConfigError("sigma0 must be nonnegative");
  if (!(sigmaY >= 0.0) || !std::isfinite(sigmaY)) throw ConfigError("sigmaY must be nonnegative");
  check_simplex(pi_H, Cardinalities::n_H, "pi_H");
  check_simplex(pi_P, card.n_P, "pi_P");
  check_table(pi_S, card.n_S, "pi_S");
  check_table(pi_T, card.n_T, "pi_T");
}

double DeviceRecord::w(int t) const {
  if (!times[t]) throw DataError("device " + id + ": time w" + std::to_string(t) + " missing");
  return *times[t];
}

double DeviceRecord::y(int t) const {
  if (!resistances[t]) {
    throw DataError("device " + id + ": resistance y" + std::to_string(t) + " missing");
  }
  return *resistances[t];
}

void DeviceRecord::validate() const {
  if (!has(0)) throw DataError("device " + id + ": initial measurement missing");
  if (*times[0] != 0.0) throw DataError("device " + id + ": w0 must be 0");
  double last = 0.0;
  for (int t = 0; t < 4; ++t) {
    if (times[t].has_value() != resistances[t].has_value()) {
      throw DataError("device " + id + ": time and resistance must be recorded together");
    }
    if (!has(t)) continue;
    if (t > 0 && !(*times[t] > last)) {
      throw DataError("device " + id + ": measurement times must strictly increase");
    }
    if (!(*resistances[t] > 0.0) || !std::isfinite(*resistances[t])) {
      throw DataError("device " + id + ": resistances must be positive");
    }
    last = *times[t];
  }
}

}  // namespace relscm
