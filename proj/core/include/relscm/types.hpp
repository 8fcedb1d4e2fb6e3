#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relscm {

/// Stress regime in force on a device: field operation or accelerated thermal cycling.
enum class Regime { NS, AS };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

/// Number of humidity classes. Class -1 (normal) is level 1, class +1 (high) is level 2.
inline constexpr int kHumidityLevels = 2;

int humidity_level(int humidity_class);
int humidity_class(int humidity_level);

/// Number of levels of each categorical factor.
struct Cardinalities {
  int n_S = 4;
  int n_T = 4;
  int n_P = 4;

  static constexpr int n_H = kHumidityLevels;

  int cells() const { return n_S * n_T * n_P * n_H; }
  bool operator==(const Cardinalities&) const = default;
};

/// One device's factor levels. x_S, x_T, x_P are 1-based levels; x_H is the
/// humidity class, -1 (normal) or +1 (high).
struct Configuration {
  int x_S = 1;
  int x_T = 1;
  int x_P = 1;
  int x_H = -1;

  int h_level() const { return humidity_level(x_H); }
  bool operator==(const Configuration&) const = default;
};

/// Throws CardinalityError when any level is outside `card`.
void validate(const Configuration& config, const Cardinalities& card);

/// Constants held fixed during inference.
struct FixedConstants {
  double psi = 2.0;                ///< knot of the cubic term, kilohours
  double tau = 3.0;                ///< exponent of the cubic term
  double gamma = 10.0;             ///< NS-to-AS time-scale ratio
  double threshold_factor = 1.1;   ///< failure when resistance reaches this multiple of y0
  std::array<double, 3> nominal_times{0.72, 2.16, 3.60};  ///< kilohours

  void validate() const;
};

/// Full parameter vector of the parametric model. Effect vectors are indexed
/// by 0-based level; every effect vector sums to zero and every probability
/// row lies on the simplex.
struct ModelParams {
  double mu0 = 1000.0;
  std::vector<double> alpha_S, alpha_T, alpha_P;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::vector<double> delta1_S, delta1_T, delta1_P, delta1_H;
  std::vector<double> delta2_S, delta2_T, delta2_P, delta2_H;
  double sigma0 = 1.0;
  double sigmaY = 1.0;
  std::vector<double> pi_H;                  ///< over humidity levels (normal, high)
  std::vector<double> pi_P;
  std::vector<std::vector<double>> pi_S;     ///< n_H rows of n_S
  std::vector<std::vector<double>> pi_T;     ///< n_H rows of n_T

  /// All effects zero, unit noise scales, uniform probability tables.
  static ModelParams zeros(const Cardinalities& card);

  Cardinalities cardinalities() const;

  /// Throws ConfigError on shape mismatch, broken sum-to-zero, negative
  /// scale or a row off the simplex.
  void validate() const;
};

/// One device: configuration, regime, measurement times (kilohours) and
/// resistances (ohms). Index 0 is the initial measurement at time 0.
struct DeviceRecord {
  std::string id;
  Configuration config;
  Regime regime = Regime::AS;
  std::array<std::optional<double>, 4> times;
  std::array<std::optional<double>, 4> resistances;

  bool has(int t) const { return times[t].has_value() && resistances[t].has_value(); }
  double w(int t) const;
  double y(int t) const;

  /// Throws DataError unless w0 = 0, recorded times strictly increase and
  /// recorded resistances are positive.
  void validate() const;
};

}  // namespace relscm
