#include "relscm/param_vector.hpp"

#include <algorithm>
#include <cmath>

#include "relscm/errors.hpp"

namespace relscm {

namespace {

std::string indexed(const std::string& name, int i) {
  return name + "[" + std::to_string(i) + "]";
}

template <class Fn>
void visit_blocks(const Cardinalities& card, Fn&& fn) {
  // fn(name, length) for scalars (length 0) and vectors; tables as rows
  fn("mu0", 0);
  fn("alpha_S", card.n_S);
  fn("alpha_T", card.n_T);
  fn("alpha_P", card.n_P);
  fn("beta1", 0);
  fn("beta2", 0);
  fn("delta1_S", card.n_S);
  fn("delta1_T", card.n_T);
  fn("delta1_P", card.n_P);
  fn("delta1_H", Cardinalities::n_H);
  fn("delta2_S", card.n_S);
  fn("delta2_T", card.n_T);
  fn("delta2_P", card.n_P);
  fn("delta2_H", Cardinalities::n_H);
  fn("sigma0", 0);
  fn("sigmaY", 0);
  fn("pi_H", Cardinalities::n_H);
  fn("pi_P", card.n_P);
}

double round6(double x) { return std::round(x * 1e6) / 1e6; }

void quantize_zero_sum(std::vector<double>& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    v[i] = round6(v[i]);
    sum += v[i];
  }
  v.back() = round6(-sum);
}

void quantize_simplex(std::vector<double>& v) {
  for (double& p : v) p = round6(p);
  // pick the largest entry to absorb the rounding remainder
  auto largest = std::max_element(v.begin(), v.end());
  double others = 0.0;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (it != largest) others += *it;
  }
  *largest = round6(1.0 - others);
  // exact decimal sum up to floating error
  double total = 0.0;
  for (double p : v) total += p;
  *largest += 1.0 - total;
}

}  // namespace

std::vector<std::string> param_names(const Cardinalities& card) {
  std::vector<std::string> names;
  visit_blocks(card, [&](const std::string& name, int len) {
    if (len == 0) {
      names.push_back(name);
    } else {
      for (int i = 1; i <= len; ++i) names.push_back(indexed(name, i));
    }
  });
  for (const char* table : {"pi_S", "pi_T"}) {
    const int cols = std::string(table) == "pi_S" ? card.n_S : card.n_T;
    for (int h = 1; h <= Cardinalities::n_H; ++h)
      for (int i = 1; i <= cols; ++i)
        names.push_back(std::string(table) + "[" + std::to_string(h) + "][" + std::to_string(i) + "]");
  }
  return names;
}

std::vector<double> flatten(const ModelParams& t) {
  std::vector<double> out;
  auto put = [&](const std::vector<double>& v) { out.insert(out.end(), v.begin(), v.end()); };
  out.push_back(t.mu0);
  put(t.alpha_S);
  put(t.alpha_T);
  put(t.alpha_P);
  out.push_back(t.beta1);
  out.push_back(t.beta2);
  put(t.delta1_S);
  put(t.delta1_T);
  put(t.delta1_P);
  put(t.delta1_H);
  put(t.delta2_S);
  put(t.delta2_T);
  put(t.delta2_P);
  put(t.delta2_H);
  out.push_back(t.sigma0);
  out.push_back(t.sigmaY);
  put(t.pi_H);
  put(t.pi_P);
  for (const auto& row : t.pi_S) put(row);
  for (const auto& row : t.pi_T) put(row);
  return out;
}

ModelParams unflatten(std::span<const double> values, const Cardinalities& card) {
  const std::size_t expected = param_names(card).size();
  if (values.size() != expected) {
    throw ConfigError("parameter vector has " + std::to_string(values.size()) +
                      " entries, expected " + std::to_string(expected));
  }
  std::size_t k = 0;
  auto take = [&](int n) {
    std::vector<double> v(values.begin() + k, values.begin() + k + n);
    k += n;
    return v;
  };
  ModelParams t;
  t.mu0 = values[k++];
  t.alpha_S = take(card.n_S);
  t.alpha_T = take(card.n_T);
  t.alpha_P = take(card.n_P);
  t.beta1 = values[k++];
  t.beta2 = values[k++];
  t.delta1_S = take(card.n_S);
  t.delta1_T = take(card.n_T);
  t.delta1_P = take(card.n_P);
  t.delta1_H = take(Cardinalities::n_H);
  t.delta2_S = take(card.n_S);
  t.delta2_T = take(card.n_T);
  t.delta2_P = take(card.n_P);
  t.delta2_H = take(Cardinalities::n_H);
  t.sigma0 = values[k++];
  t.sigmaY = values[k++];
  t.pi_H = take(Cardinalities::n_H);
  t.pi_P = take(card.n_P);
  for (int h = 0; h < Cardinalities::n_H; ++h) t.pi_S.push_back(take(card.n_S));
  for (int h = 0; h < Cardinalities::n_H; ++h) t.pi_T.push_back(take(card.n_T));
  return t;
}

void quantize6(ModelParams& t) {
  t.mu0 = round6(t.mu0);
  t.beta1 = round6(t.beta1);
  t.beta2 = round6(t.beta2);
  t.sigma0 = round6(t.sigma0);
  t.sigmaY = round6(t.sigmaY);
  for (auto* v : {&t.alpha_S, &t.alpha_T, &t.alpha_P, &t.delta1_S, &t.delta1_T, &t.delta1_P,
                  &t.delta1_H, &t.delta2_S, &t.delta2_T, &t.delta2_P, &t.delta2_H}) {
    quantize_zero_sum(*v);
  }
  quantize_simplex(t.pi_H);
  quantize_simplex(t.pi_P);
  for (auto& row : t.pi_S) quantize_simplex(row);
  for (auto& row : t.pi_T) quantize_simplex(row);
}

Cardinalities cardinalities_from_names(std::span<const std::string> names) {
  auto count = [&](const std::string& prefix) {
    return static_cast<int>(std::count_if(names.begin(), names.end(),
                                          [&](const std::string& n) { return n.rfind(prefix, 0) == 0; }));
  };
  Cardinalities card;
  card.n_S = count("alpha_S[");
  card.n_T = count("alpha_T[");
  card.n_P = count("alpha_P[");
  if (card.n_S < 2 || card.n_T < 2 || card.n_P < 2) throw ConfigError("draw columns do not name a parameter vector");
  const auto expected = param_names(card);
  if (!std::equal(names.begin(), names.end(), expected.begin(), expected.end())) {
    throw ConfigError("draw columns do not match the parameter layout");
  }
  return card;
}

}  // namespace relscm
