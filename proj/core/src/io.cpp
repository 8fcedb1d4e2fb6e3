#include "relscm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "relscm/errors.hpp"

namespace relscm::io {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& context) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(context + "." + key + ": " + e.what());
  }
}

template <class T>
void get_if(const json& obj, const char* key, T& target, const std::string& context) {
  if (obj.contains(key)) target = get<T>(obj, key, context);
}

json constants_to_json(const FixedConstants& c) {
  return {{"psi", c.psi},
          {"tau", c.tau},
          {"gamma", c.gamma},
          {"threshold_factor", c.threshold_factor},
          {"nominal_times", c.nominal_times}};
}

FixedConstants constants_from_json(const json& j) {
  const std::string ctx = "constants";
  check_keys(j, {"psi", "tau", "gamma", "threshold_factor", "nominal_times"}, ctx);
  FixedConstants c;
  get_if(j, "psi", c.psi, ctx);
  get_if(j, "tau", c.tau, ctx);
  get_if(j, "gamma", c.gamma, ctx);
  get_if(j, "threshold_factor", c.threshold_factor, ctx);
  get_if(j, "nominal_times", c.nominal_times, ctx);
  c.validate();
  return c;
}

json card_to_json(const Cardinalities& card) { return {{"n_S", card.n_S}, {"n_T", card.n_T}, {"n_P", card.n_P}}; }

Cardinalities card_from_json(const json& j) {
  const std::string ctx = "cardinalities";
  check_keys(j, {"n_S", "n_T", "n_P"}, ctx);
  Cardinalities card;
  get_if(j, "n_S", card.n_S, ctx);
  get_if(j, "n_T", card.n_T, ctx);
  get_if(j, "n_P", card.n_P, ctx);
  if (card.n_S < 2 || card.n_T < 2 || card.n_P < 2) throw ConfigError("cardinalities: every factor needs >= 2 levels");
  return card;
}

json params_json(const ModelParams& t) {
  return {{"mu0", t.mu0},           {"alpha_S", t.alpha_S},   {"alpha_T", t.alpha_T},   {"alpha_P", t.alpha_P},
          {"beta1", t.beta1},       {"beta2", t.beta2},       {"delta1_S", t.delta1_S}, {"delta1_T", t.delta1_T},
          {"delta1_P", t.delta1_P}, {"delta1_H", t.delta1_H}, {"delta2_S", t.delta2_S}, {"delta2_T", t.delta2_T},
          {"delta2_P", t.delta2_P}, {"delta2_H", t.delta2_H}, {"sigma0", t.sigma0},     {"sigmaY", t.sigmaY},
          {"pi_H", t.pi_H},         {"pi_P", t.pi_P},         {"pi_S", t.pi_S},         {"pi_T", t.pi_T}};
}

ModelParams params_from(const json& j) {
  const std::string ctx = "truth";
  check_keys(j,
             {"mu0", "alpha_S", "alpha_T", "alpha_P", "beta1", "beta2", "delta1_S", "delta1_T", "delta1_P", "delta1_H",
              "delta2_S", "delta2_T", "delta2_P", "delta2_H", "sigma0", "sigmaY", "pi_H", "pi_P", "pi_S", "pi_T",
              "comment"},
             ctx);
  auto size_of = [&](const char* key) {
    return j.contains(key) ? static_cast<int>(get<std::vector<double>>(j, key, ctx).size()) : 4;
  };
  Cardinalities card;
  card.n_S = size_of("alpha_S");
  card.n_T = size_of("alpha_T");
  card.n_P = size_of("alpha_P");
  ModelParams t = ModelParams::zeros(card);
  get_if(j, "mu0", t.mu0, ctx);
  get_if(j, "alpha_S", t.alpha_S, ctx);
  get_if(j, "alpha_T", t.alpha_T, ctx);
  get_if(j, "alpha_P", t.alpha_P, ctx);
  get_if(j, "beta1", t.beta1, ctx);
  get_if(j, "beta2", t.beta2, ctx);
  get_if(j, "delta1_S", t.delta1_S, ctx);
  get_if(j, "delta1_T", t.delta1_T, ctx);
  get_if(j, "delta1_P", t.delta1_P, ctx);
  get_if(j, "delta1_H", t.delta1_H, ctx);
  get_if(j, "delta2_S", t.delta2_S, ctx);
  get_if(j, "delta2_T", t.delta2_T, ctx);
  get_if(j, "delta2_P", t.delta2_P, ctx);
  get_if(j, "delta2_H", t.delta2_H, ctx);
  get_if(j, "sigma0", t.sigma0, ctx);
  get_if(j, "sigmaY", t.sigmaY, ctx);
  get_if(j, "pi_H", t.pi_H, ctx);
  get_if(j, "pi_P", t.pi_P, ctx);
  get_if(j, "pi_S", t.pi_S, ctx);
  get_if(j, "pi_T", t.pi_T, ctx);
  t.validate();
  return t;
}

json priors_to_json(const PriorHyper& p) {
  json j = {{"df", p.df},
            {"effect_scale", p.effect_scale},
            {"beta_scale", p.beta_scale},
            {"mu0_location", p.mu0_location},
            {"mu0_scale", p.mu0_scale},
            {"sigma_scale", p.sigma_scale}};
  if (!p.lambda_H.empty()) j["lambda_H"] = p.lambda_H;
  if (!p.lambda_P.empty()) j["lambda_P"] = p.lambda_P;
  if (!p.lambda_S.empty()) j["lambda_S"] = p.lambda_S;
  if (!p.lambda_T.empty()) j["lambda_T"] = p.lambda_T;
  return j;
}

PriorHyper priors_from_json(const json& j) {
  const std::string ctx = "priors";
  check_keys(j,
             {"df", "effect_scale", "beta_scale", "mu0_location", "mu0_scale", "sigma_scale", "lambda_H", "lambda_P",
              "lambda_S", "lambda_T"},
             ctx);
  PriorHyper p;
  get_if(j, "df", p.df, ctx);
  get_if(j, "effect_scale", p.effect_scale, ctx);
  get_if(j, "beta_scale", p.beta_scale, ctx);
  get_if(j, "mu0_location", p.mu0_location, ctx);
  get_if(j, "mu0_scale", p.mu0_scale, ctx);
  get_if(j, "sigma_scale", p.sigma_scale, ctx);
  get_if(j, "lambda_H", p.lambda_H, ctx);
  get_if(j, "lambda_P", p.lambda_P, ctx);
  get_if(j, "lambda_S", p.lambda_S, ctx);
  get_if(j, "lambda_T", p.lambda_T, ctx);
  return p;
}

json sampler_to_json(const SamplerConfig& s) {
  return {{"chains", s.chains},
          {"warmup", s.warmup},
          {"draws", s.draws},
          {"seed", s.seed},
          {"algorithm", s.algorithm},
          {"target_accept", s.target_accept},
          {"max_tree_depth", s.max_tree_depth}};
}

SamplerConfig sampler_from_json(const json& j) {
  const std::string ctx = "sampler";
  check_keys(j, {"chains", "warmup", "draws", "seed", "algorithm", "target_accept", "max_tree_depth"}, ctx);
  SamplerConfig s;
  get_if(j, "chains", s.chains, ctx);
  get_if(j, "warmup", s.warmup, ctx);
  get_if(j, "draws", s.draws, ctx);
  get_if(j, "seed", s.seed, ctx);
  get_if(j, "algorithm", s.algorithm, ctx);
  get_if(j, "target_accept", s.target_accept, ctx);
  get_if(j, "max_tree_depth", s.max_tree_depth, ctx);
  return s;
}

json fit_spec_to_json(const FitSpec& f) {
  return {{"regime", std::string(to_string(f.regime))},
          {"cardinalities", card_to_json(f.card)},
          {"constants", constants_to_json(f.constants)},
          {"priors", priors_to_json(f.priors)},
          {"cubic_active", f.cubic_active},
          {"probabilities_active", f.probabilities_active}};
}

json diagnostics_to_json(const Diagnostics& d) {
  json params = json::array();
  for (const auto& p : d.params) {
    params.push_back({{"name", p.name},
                      {"rhat", p.rhat ? json(*p.rhat) : json(nullptr)},
                      {"ess", p.ess ? json(*p.ess) : json(nullptr)},
                      {"degenerate", p.degenerate}});
  }
  return {{"converged", d.converged}, {"max_rhat", d.max_rhat}, {"min_ess", d.min_ess}, {"params", params}};
}

Diagnostics diagnostics_from_json(const json& j) {
  const std::string ctx = "diagnostics";
  check_keys(j, {"converged", "max_rhat", "min_ess", "params"}, ctx);
  Diagnostics d;
  d.converged = get<bool>(j, "converged", ctx);
  d.max_rhat = get<double>(j, "max_rhat", ctx);
  d.min_ess = get<double>(j, "min_ess", ctx);
  for (const auto& p : j.at("params")) {
    check_keys(p, {"name", "rhat", "ess", "degenerate"}, ctx + ".params");
    ParamDiagnostic pd;
    pd.name = get<std::string>(p, "name", ctx);
    if (!p.at("rhat").is_null()) pd.rhat = p.at("rhat").get<double>();
    if (!p.at("ess").is_null()) pd.ess = p.at("ess").get<double>();
    pd.degenerate = get<bool>(p, "degenerate", ctx);
    d.params.push_back(std::move(pd));
  }
  return d;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view chomp(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::string at_line(std::size_t line, const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; }

double parse_double(std::string_view s, std::size_t line, const char* field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError(at_line(line, std::string("field ") + field + ": '" + std::string(s) + "' is not a number"));
  }
  return v;
}

long long parse_int(std::string_view s, std::size_t line, const char* field) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(at_line(line, std::string("field ") + field + ": '" + std::string(s) + "' is not an integer"));
  }
  return v;
}

}  // namespace

std::string format6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  // avoid "-0.000000"
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

void write_dataset_csv(std::ostream& out, std::span<const DeviceRecord> records) {
  out << kDatasetHeader << '\n';
  for (const auto& r : records) {
    if (r.id.find_first_of(",\"\n\r") != std::string::npos) {
      throw DataError("device id '" + r.id + "' contains a character not allowed in CSV");
    }
    out << r.id << ',' << to_string(r.regime) << ',' << r.config.x_S << ',' << r.config.x_T << ',' << r.config.x_P
        << ',' << r.config.x_H;
    for (const auto& w : r.times) {
      out << ',';
      if (w) out << format6(*w);
    }
    for (const auto& y : r.resistances) {
      out << ',';
      if (y) out << format6(*y);
    }
    out << '\n';
  }
}

std::vector<DeviceRecord> read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw DataError(at_line(1, "empty dataset file"));
  if (chomp(line) != kDatasetHeader) {
    throw DataError(at_line(1, "header must be '" + std::string(kDatasetHeader) + "'"));
  }
  std::vector<DeviceRecord> records;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = chomp(line);
    if (text.empty()) continue;
    const auto f = split(text, ',');
    if (f.size() != 14) {
      throw DataError(at_line(lineno, "expected 14 fields, found " + std::to_string(f.size())));
    }
    DeviceRecord r;
    r.id = std::string(f[0]);
    if (r.id.empty()) throw DataError(at_line(lineno, "empty device id"));
    try {
      r.regime = parse_regime(f[1]);
    } catch (const ConfigError& e) {
      throw DataError(at_line(lineno, e.what()));
    }
    r.config.x_S = static_cast<int>(parse_int(f[2], lineno, "x_S"));
    r.config.x_T = static_cast<int>(parse_int(f[3], lineno, "x_T"));
    r.config.x_P = static_cast<int>(parse_int(f[4], lineno, "x_P"));
    r.config.x_H = static_cast<int>(parse_int(f[5], lineno, "x_H"));
    if (r.config.x_S < 1 || r.config.x_T < 1 || r.config.x_P < 1) {
      throw DataError(at_line(lineno, "factor levels start at 1"));
    }
    if (r.config.x_H != -1 && r.config.x_H != 1) throw DataError(at_line(lineno, "x_H must be -1 or 1"));
    static constexpr const char* kW[] = {"w0", "w1", "w2", "w3"};
    static constexpr const char* kY[] = {"y0", "y1", "y2", "y3"};
    for (int t = 0; t < 4; ++t) {
      if (!f[6 + t].empty()) r.times[t] = parse_double(f[6 + t], lineno, kW[t]);
      if (!f[10 + t].empty()) r.resistances[t] = parse_double(f[10 + t], lineno, kY[t]);
      if (r.times[t].has_value() != r.resistances[t].has_value()) {
        throw DataError(at_line(lineno, std::string(kW[t]) + " and " + kY[t] + " must both be present or both empty"));
      }
    }
    try {
      r.validate();
    } catch (const DataError& e) {
      throw DataError(at_line(lineno, e.what()));
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw DataError(at_line(lineno, "dataset has no records"));
  return records;
}

void save_dataset(const std::filesystem::path& path, std::span<const DeviceRecord> records) {
  std::ostringstream out;
  write_dataset_csv(out, records);
  write_text(path, out.str());
}

std::vector<DeviceRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path.string());
  try {
    return read_dataset_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string params_to_json(const ModelParams& theta) { return params_json(theta).dump(2) + "\n"; }

ModelParams params_from_json(std::string_view text) { return params_from(parse_json(text, "truth")); }

GeneratorSpec generator_spec_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  const json j = parse_json(text, "generator spec");
  const std::string ctx = "generator";
  check_keys(j, {"regime", "design", "seed", "jitter_times", "constants", "truth", "truth_file", "comment"}, ctx);
  GeneratorSpec spec;
  spec.regime = parse_regime(get<std::string>(j, "regime", ctx));
  if (j.contains("constants")) spec.constants = constants_from_json(j.at("constants"));
  get_if(j, "seed", spec.seed, ctx);
  get_if(j, "jitter_times", spec.jitter_times, ctx);

  if (j.contains("truth") == j.contains("truth_file")) {
    throw ConfigError("generator: give exactly one of 'truth' and 'truth_file'");
  }
  if (j.contains("truth")) {
    spec.truth = params_from(j.at("truth"));
  } else {
    std::filesystem::path p = get<std::string>(j, "truth_file", ctx);
    if (p.is_relative()) p = base_dir / p;
    spec.truth = params_from_json(read_text(p));
  }

  const json& d = j.at("design");
  check_keys(d, {"type", "replicates", "n"}, ctx + ".design");
  const auto type = get<std::string>(d, "type", ctx + ".design");
  if (type == "full_factorial") {
    if (d.contains("n")) throw ConfigError("generator.design: 'n' belongs to observational designs");
    FullFactorial ff;
    get_if(d, "replicates", ff.replicates, ctx + ".design");
    spec.design = ff;
  } else if (type == "observational") {
    if (d.contains("replicates")) throw ConfigError("generator.design: 'replicates' belongs to full_factorial designs");
    Observational ob;
    get_if(d, "n", ob.n, ctx + ".design");
    spec.design = ob;
  } else {
    throw ConfigError("generator.design.type must be full_factorial or observational");
  }
  spec.validate();
  return spec;
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
  json design;
  if (const auto* ff = std::get_if<FullFactorial>(&spec.design)) {
    design = {{"type", "full_factorial"}, {"replicates", ff->replicates}};
  } else {
    design = {{"type", "observational"}, {"n", std::get<Observational>(spec.design).n}};
  }
  const json j = {{"regime", std::string(to_string(spec.regime))},
                  {"design", design},
                  {"seed", spec.seed},
                  {"jitter_times", spec.jitter_times},
                  {"constants", constants_to_json(spec.constants)},
                  {"truth", params_json(spec.truth)}};
  return j.dump(2) + "\n";
}

FitConfig fit_config_from_json(std::string_view text) {
  const json j = parse_json(text, "fit config");
  const std::string ctx = "fit";
  check_keys(j,
             {"regime", "dataset", "cardinalities", "constants", "priors", "cubic_active", "probabilities_active",
              "sampler", "allow_unconverged", "comment"},
             ctx);
  const Regime regime = parse_regime(get<std::string>(j, "regime", ctx));
  const Cardinalities card = j.contains("cardinalities") ? card_from_json(j.at("cardinalities")) : Cardinalities{};
  const FixedConstants constants = j.contains("constants") ? constants_from_json(j.at("constants")) : FixedConstants{};
  FitConfig cfg;
  cfg.spec = FitSpec::for_regime(regime, card, constants);
  if (j.contains("priors")) cfg.spec.priors = priors_from_json(j.at("priors"));
  get_if(j, "cubic_active", cfg.spec.cubic_active, ctx);
  get_if(j, "probabilities_active", cfg.spec.probabilities_active, ctx);
  if (j.contains("sampler")) cfg.sampler = sampler_from_json(j.at("sampler"));
  if (j.contains("dataset")) cfg.dataset = get<std::string>(j, "dataset", ctx);
  get_if(j, "allow_unconverged", cfg.allow_unconverged, ctx);
  cfg.spec.validate();
  cfg.sampler.validate(true);
  return cfg;
}

void write_draws_csv(std::ostream& out, const PosteriorDraws& draws) {
  out << "chain,iteration";
  for (const auto& n : draws.names) out << ',' << n;
  out << '\n';
  for (int i = 0; i < draws.rows(); ++i) {
    out << draws.chain_of(i) + 1 << ',' << (i % draws.draws_per_chain) + 1;
    for (double v : draws.row(i)) out << ',' << format6(v);
    out << '\n';
  }
}

PosteriorDraws read_draws_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(at_line(1, "empty draws file"));
  const auto header = split(chomp(line), ',');
  if (header.size() < 3 || header[0] != "chain" || header[1] != "iteration") {
    throw DataError(at_line(1, "draws header must start with 'chain,iteration'"));
  }
  PosteriorDraws d;
  for (std::size_t k = 2; k < header.size(); ++k) d.names.emplace_back(header[k]);
  std::size_t lineno = 1;
  int current_chain = 0;
  int per_chain = 0;
  std::vector<int> counts;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = chomp(line);
    if (text.empty()) continue;
    const auto f = split(text, ',');
    if (f.size() != header.size()) {
      throw DataError(at_line(lineno, "expected " + std::to_string(header.size()) + " fields"));
    }
    const auto chain = static_cast<int>(parse_int(f[0], lineno, "chain"));
    const auto iter = static_cast<int>(parse_int(f[1], lineno, "iteration"));
    if (chain == current_chain + 1) {
      counts.push_back(0);
      current_chain = chain;
    } else if (chain != current_chain) {
      throw DataError(at_line(lineno, "chains must appear in order 1, 2, ..."));
    }
    ++counts.back();
    if (iter != counts.back()) throw DataError(at_line(lineno, "iterations must count 1, 2, ... within a chain"));
    for (std::size_t k = 2; k < f.size(); ++k) d.values.push_back(parse_double(f[k], lineno, header[k].data()));
  }
  if (counts.empty()) throw DataError(at_line(lineno, "draws file has no rows"));
  per_chain = counts.front();
  for (int c : counts) {
    if (c != per_chain) throw DataError("every chain must hold the same number of draws");
  }
  d.chains = static_cast<int>(counts.size());
  d.draws_per_chain = per_chain;
  return d;
}

std::string draws_sidecar_json(const DrawsBundle& b) {
  json chain_info = json::array();
  for (const auto& ci : b.draws.chain_info) {
    chain_info.push_back({{"step_size", ci.step_size},
                          {"inv_metric", ci.inv_metric},
                          {"divergences", ci.divergences},
                          {"mean_accept", ci.mean_accept},
                          {"mean_tree_depth", ci.mean_tree_depth},
                          {"leapfrog_steps", ci.leapfrog_steps}});
  }
  json j = {{"format", "relscm-draws"},
            {"version", 1},
            {"dataset", b.dataset},
            {"fit", fit_spec_to_json(b.spec)},
            {"sampler", sampler_to_json(b.draws.config)},
            {"seed", b.draws.seed},
            {"chains", b.draws.chains},
            {"draws_per_chain", b.draws.draws_per_chain},
            {"names", b.draws.names},
            {"chain_info", chain_info}};
  if (b.diagnostics) j["diagnostics"] = diagnostics_to_json(*b.diagnostics);
  return j.dump(2) + "\n";
}

DrawsBundle draws_sidecar_from_json(std::string_view text) {
  const json j = parse_json(text, "draws sidecar");
  const std::string ctx = "sidecar";
  check_keys(j,
             {"format", "version", "dataset", "fit", "sampler", "seed", "chains", "draws_per_chain", "names",
              "chain_info", "diagnostics"},
             ctx);
  if (get<std::string>(j, "format", ctx) != "relscm-draws" || get<int>(j, "version", ctx) != 1) {
    throw ConfigError("sidecar: unsupported format or version");
  }
  DrawsBundle b;
  get_if(j, "dataset", b.dataset, ctx);
  const json& f = j.at("fit");
  check_keys(f, {"regime", "cardinalities", "constants", "priors", "cubic_active", "probabilities_active"}, "sidecar.fit");
  b.spec = FitSpec::for_regime(parse_regime(get<std::string>(f, "regime", ctx)), card_from_json(f.at("cardinalities")),
                               constants_from_json(f.at("constants")));
  b.spec.priors = priors_from_json(f.at("priors"));
  b.spec.cubic_active = get<bool>(f, "cubic_active", ctx);
  b.spec.probabilities_active = get<bool>(f, "probabilities_active", ctx);
  b.draws.config = sampler_from_json(j.at("sampler"));
  b.draws.seed = get<std::uint64_t>(j, "seed", ctx);
  b.draws.chains = get<int>(j, "chains", ctx);
  b.draws.draws_per_chain = get<int>(j, "draws_per_chain", ctx);
  b.draws.names = get<std::vector<std::string>>(j, "names", ctx);
  for (const auto& ci : j.at("chain_info")) {
    check_keys(ci, {"step_size", "inv_metric", "divergences", "mean_accept", "mean_tree_depth", "leapfrog_steps"},
               "sidecar.chain_info");
    ChainInfo info;
    info.step_size = get<double>(ci, "step_size", ctx);
    info.inv_metric = get<std::vector<double>>(ci, "inv_metric", ctx);
    info.divergences = get<int>(ci, "divergences", ctx);
    info.mean_accept = get<double>(ci, "mean_accept", ctx);
    info.mean_tree_depth = get<double>(ci, "mean_tree_depth", ctx);
    info.leapfrog_steps = get<long>(ci, "leapfrog_steps", ctx);
    b.draws.chain_info.push_back(std::move(info));
  }
  if (j.contains("diagnostics")) b.diagnostics = diagnostics_from_json(j.at("diagnostics"));
  return b;
}

void save_draws(const std::filesystem::path& path, const DrawsBundle& bundle) {
  std::ostringstream out;
  write_draws_csv(out, bundle.draws);
  write_text(path, out.str());
  write_text(path.string() + ".json", draws_sidecar_json(bundle));
}

DrawsBundle load_draws(const std::filesystem::path& path) {
  DrawsBundle b = draws_sidecar_from_json(read_text(path.string() + ".json"));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open draws file " + path.string());
  PosteriorDraws values;
  try {
    values = read_draws_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (values.names != b.draws.names || values.chains != b.draws.chains ||
      values.draws_per_chain != b.draws.draws_per_chain) {
    throw DataError(path.string() + ": draws do not match their sidecar");
  }
  b.draws.values = std::move(values.values);
  return b;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace relscm::io
