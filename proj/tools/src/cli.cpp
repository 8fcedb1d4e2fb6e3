#include "relscm_cli/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relscm/counterfactual.hpp"
#include "relscm/datagen.hpp"
#include "relscm/errors.hpp"
#include "relscm/fit.hpp"
#include "relscm/io.hpp"
#include "relscm/queries.hpp"
#include "relscm/structural.hpp"

namespace relscm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using io::format6;

/// Statistical-quality failure: exit code 3.
class QualityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class HumidityCoding { Class, Index };

struct Options {
  std::string config;
  std::string out;
  std::string data;
  std::string draws;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool allow_unconverged = false;
  HumidityCoding coding = HumidityCoding::Class;
  double level = 0.95;
};

json load_json(const std::string& path) {
  try {
    return json::parse(io::read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
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
T get_or(const json& obj, const char* key, T fallback, const std::string& context) {
  return obj.contains(key) ? get<T>(obj, key, context) : fallback;
}

int humidity_from(int value, HumidityCoding coding) {
  if (coding == HumidityCoding::Index) return humidity_class(value);
  humidity_level(value);
  return value;
}

Configuration config_from(const json& j, HumidityCoding coding, const std::string& context) {
  check_keys(j, {"x_S", "x_T", "x_P", "x_H"}, context);
  Configuration c;
  c.x_S = get<int>(j, "x_S", context);
  c.x_T = get<int>(j, "x_T", context);
  c.x_P = get<int>(j, "x_P", context);
  c.x_H = humidity_from(get<int>(j, "x_H", context), coding);
  return c;
}

std::string label(const Configuration& c) {
  return "(" + std::to_string(c.x_S) + "," + std::to_string(c.x_T) + "," + std::to_string(c.x_P) + "," +
         std::to_string(c.x_H) + ")";
}

std::vector<double> grid_from(const json& q, const std::string& context) {
  if (q.contains("times") == q.contains("grid")) throw ConfigError(context + ": give exactly one of 'times' and 'grid'");
  if (q.contains("times")) {
    auto times = get<std::vector<double>>(q, "times", context);
    if (times.empty()) throw ConfigError(context + ".times: empty");
    return times;
  }
  const json& g = q.at("grid");
  check_keys(g, {"from", "to", "points"}, context + ".grid");
  const double from = get<double>(g, "from", context);
  const double to = get<double>(g, "to", context);
  const int points = get<int>(g, "points", context);
  if (points < 2 || !(to > from) || from < 0.0) throw ConfigError(context + ".grid: need 0 <= from < to and points >= 2");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[i] = from + (to - from) * i / (points - 1);
  return out;
}

json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"level", s.level}, {"hdi", {s.hdi.lo, s.hdi.hi}}};
}

json quantiles_json(const QuantileTable& q) {
  return {{"min", q.min}, {"q05", q.q05}, {"q25", q.q25}, {"q50", q.q50}, {"q75", q.q75},
          {"q95", q.q95}, {"max", q.max}, {"mean", q.mean}, {"sd", q.sd}};
}

fs::path summary_path(const std::string& out) {
  fs::path p(out);
  return p.parent_path() / (p.stem().string() + ".summary.json");
}

void write_summary(const std::string& out, const json& j, std::ostream& os) {
  const fs::path p = summary_path(out);
  io::write_text(p, j.dump(2) + "\n");
  os << "summary: " << p.string() << "\n";
}

fs::path base_dir(const std::string& config) { return fs::path(config).parent_path(); }

fs::path resolve(const std::string& path, const std::string& config) {
  fs::path p(path);
  return p.is_relative() ? base_dir(config) / p : p;
}

void require_out(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
}

io::DrawsBundle load_checked_draws(const Options& o) {
  if (o.draws.empty()) throw ConfigError("--draws is required");
  io::DrawsBundle b = io::load_draws(o.draws);
  const bool converged = b.diagnostics && b.diagnostics->converged;
  if (!converged && !o.allow_unconverged) {
    throw QualityError("draws in " + o.draws + " are not flagged as converged (use --allow-unconverged to proceed)");
  }
  return b;
}

void print_table1(const PosteriorDraws& draws, std::ostream& os, const std::string& prefix, double level) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %12s %12s %12s %12s\n", "parameter", "mean", "sd", "hdi_lo", "hdi_hi");
  os << buf;
  for (const auto& s : summarize(draws, level)) {
    if (s.name.rfind(prefix, 0) != 0) continue;
    std::snprintf(buf, sizeof buf, "%-14s %12.6f %12.6f %12.6f %12.6f\n", s.name.c_str(), s.summary.mean,
                  s.summary.sd, s.summary.hdi.lo, s.summary.hdi.hi);
    os << buf;
  }
}

void print_diagnostics(const Diagnostics& d, std::ostream& os, bool all) {
  char buf[256];
  if (all) {
    std::snprintf(buf, sizeof buf, "%-22s %10s %12s\n", "parameter", "rhat", "ess");
    os << buf;
    for (const auto& p : d.params) {
      if (p.degenerate) {
        std::snprintf(buf, sizeof buf, "%-22s %10s %12s\n", p.name.c_str(), "N/A", "N/A");
      } else {
        std::snprintf(buf, sizeof buf, "%-22s %10.4f %12.1f\n", p.name.c_str(), *p.rhat, p.ess.value_or(0.0));
      }
      os << buf;
    }
  }
  std::snprintf(buf, sizeof buf, "max_rhat %.4f  min_ess %.1f  converged %s\n", d.max_rhat, d.min_ess,
                d.converged ? "yes" : "no");
  os << buf;
}

// ---- commands ---------------------------------------------------------------

int cmd_generate(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  GeneratorSpec spec = io::generator_spec_from_json(io::read_text(o.config), base_dir(o.config));
  if (o.seed_set) spec.seed = o.seed;
  const auto records = generate_dataset(spec);
  io::save_dataset(o.out, records);
  os << "wrote " << records.size() << " rows (" << to_string(spec.regime) << ", seed " << spec.seed << ") to "
     << o.out << "\n";
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  io::FitConfig cfg = io::fit_config_from_json(io::read_text(o.config));
  if (o.seed_set) cfg.sampler.seed = o.seed;
  fs::path data_path;
  if (!o.data.empty()) {
    data_path = o.data;
  } else if (cfg.dataset) {
    data_path = resolve(*cfg.dataset, o.config);
  } else {
    throw ConfigError("no dataset: pass --data or set 'dataset' in the fit config");
  }
  const auto records = io::load_dataset(data_path);
  FitResult result = fit(records, cfg.spec, cfg.sampler);

  io::DrawsBundle bundle;
  bundle.draws = std::move(result.draws);
  bundle.spec = cfg.spec;
  bundle.diagnostics = result.diagnostics;
  bundle.dataset = data_path.filename().string();
  io::save_draws(o.out, bundle);

  os << "fitted " << records.size() << " devices (" << to_string(cfg.spec.regime) << "), " << bundle.draws.chains
     << " chains x " << bundle.draws.draws_per_chain << " draws, seed " << bundle.draws.seed << "\n";
  int divergences = 0;
  for (const auto& ci : bundle.draws.chain_info) divergences += ci.divergences;
  os << "divergent transitions after warmup: " << divergences << "\n";
  print_diagnostics(result.diagnostics, os, false);
  print_table1(bundle.draws, os, "delta1_S", o.level);
  os << "draws: " << o.out << "\n";
  if (!result.diagnostics.converged && !(o.allow_unconverged || cfg.allow_unconverged)) {
    throw QualityError("fit did not converge (max R-hat > 1.01 or min ESS < 400)");
  }
  return kExitOk;
}

int cmd_diagnose(const Options& o, std::ostream& os) {
  if (o.draws.empty()) throw ConfigError("--draws is required");
  const io::DrawsBundle b = io::load_draws(o.draws);
  const Diagnostics d = diagnose(b.draws);
  print_diagnostics(d, os, true);
  if (!o.out.empty()) {
    json params = json::array();
    for (const auto& p : d.params) {
      params.push_back({{"name", p.name},
                        {"rhat", p.rhat ? json(*p.rhat) : json(nullptr)},
                        {"ess", p.ess ? json(*p.ess) : json(nullptr)},
                        {"degenerate", p.degenerate}});
    }
    io::write_text(o.out, json{{"converged", d.converged}, {"max_rhat", d.max_rhat}, {"min_ess", d.min_ess},
                               {"params", params}}
                              .dump(2) +
                              "\n");
  }
  if (!d.converged && !o.allow_unconverged) throw QualityError("draws are not converged");
  return kExitOk;
}

int cmd_summarize(const Options& o, std::ostream& os) {
  const io::DrawsBundle b = load_checked_draws(o);
  print_table1(b.draws, os, "", o.level);
  if (!o.out.empty()) {
    std::ostringstream csv;
    csv << "parameter,mean,sd,hdi_lo,hdi_hi\n";
    for (const auto& s : summarize(b.draws, o.level)) {
      csv << s.name << ',' << format6(s.summary.mean) << ',' << format6(s.summary.sd) << ','
          << format6(s.summary.hdi.lo) << ',' << format6(s.summary.hdi.hi) << '\n';
    }
    io::write_text(o.out, csv.str());
  }
  return kExitOk;
}

int cmd_estimand(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  const io::DrawsBundle b = load_checked_draws(o);
  const json q = load_json(o.config);
  const std::string ctx = "estimand";
  check_keys(q, {"estimand", "config", "config_b", "x_H", "times", "level", "comment"}, ctx);
  const auto kind = get<std::string>(q, "estimand", ctx);
  const double level = get_or(q, "level", o.level, ctx);
  const auto times = get<std::vector<double>>(q, "times", ctx);
  if (times.empty()) throw ConfigError("estimand.times: empty");
  const Configuration a = config_from(q.at("config"), o.coding, ctx + ".config");
  validate(a, b.spec.card);

  std::function<EstimandResult(double)> eval;
  std::string title;
  if (kind == "delta1") {
    if (q.contains("config_b") || q.contains("x_H")) throw ConfigError("estimand: delta1 takes a single config");
    eval = [&](double w) { return delta1_posterior(a, w, b.draws, b.spec.constants, level); };
    title = "delta1 " + label(a);
  } else if (kind == "contrast") {
    const Configuration c = config_from(get<json>(q, "config_b", ctx), o.coding, ctx + ".config_b");
    validate(c, b.spec.card);
    const int x_H = q.contains("x_H") ? humidity_from(get<int>(q, "x_H", ctx), o.coding) : a.x_H;
    eval = [&, c, x_H](double w) { return delta_contrast_posterior(a, c, x_H, w, b.draws, b.spec.constants, level); };
    title = "contrast " + label(a) + " -> " + label(c);
  } else {
    throw ConfigError("estimand.estimand must be delta1 or contrast");
  }

  std::ostringstream csv;
  csv << "draw,w,value\n";
  json rows = json::array();
  char buf[256];
  os << title << "\n";
  std::snprintf(buf, sizeof buf, "%10s %12s %12s %12s %12s\n", "w", "mean", "sd", "hdi_lo", "hdi_hi");
  os << buf;
  for (double w : times) {
    const EstimandResult r = eval(w);
    for (std::size_t i = 0; i < r.values.size(); ++i) csv << i + 1 << ',' << format6(w) << ',' << format6(r.values[i]) << '\n';
    std::snprintf(buf, sizeof buf, "%10.4f %12.6f %12.6f %12.6f %12.6f\n", w, r.summary.mean, r.summary.sd,
                  r.summary.hdi.lo, r.summary.hdi.hi);
    os << buf;
    json row = summary_json(r.summary);
    row["w"] = w;
    rows.push_back(row);
  }
  io::write_text(o.out, csv.str());
  write_summary(o.out, {{"estimand", kind}, {"title", title}, {"rows", rows}}, os);
  return kExitOk;
}

int cmd_reliability(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  const io::DrawsBundle b = load_checked_draws(o);
  const json q = load_json(o.config);
  const std::string ctx = "reliability";
  check_keys(q, {"config", "regime", "y0", "times", "grid", "level", "comment"}, ctx);
  const Configuration config = config_from(q.at("config"), o.coding, ctx + ".config");
  validate(config, b.spec.card);
  const Regime regime = q.contains("regime") ? parse_regime(get<std::string>(q, "regime", ctx)) : b.spec.regime;
  const std::optional<double> y0 = q.contains("y0") ? std::optional<double>(get<double>(q, "y0", ctx)) : std::nullopt;
  const double level = get_or(q, "level", o.level, ctx);
  const auto grid = grid_from(q, ctx);
  const auto curve = reliability_curve(grid, config, regime, y0, b.draws, b.spec.constants, level);

  std::ostringstream csv;
  csv << "t,mean,sd,hdi_lo,hdi_hi\n";
  json rows = json::array();
  for (const auto& p : curve) {
    csv << format6(p.t) << ',' << format6(p.summary.mean) << ',' << format6(p.summary.sd) << ','
        << format6(p.summary.hdi.lo) << ',' << format6(p.summary.hdi.hi) << '\n';
    json row = summary_json(p.summary);
    row["t"] = p.t;
    rows.push_back(row);
  }
  io::write_text(o.out, csv.str());
  os << "reliability " << label(config) << " " << to_string(regime) << (y0 ? " known y0" : " unknown y0") << ": "
     << curve.size() << " grid points -> " << o.out << "\n";
  write_summary(o.out, {{"config", label(config)}, {"regime", std::string(to_string(regime))}, {"rows", rows}}, os);
  return kExitOk;
}

int cmd_predict_failure(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  const io::DrawsBundle b = load_checked_draws(o);
  if (b.spec.regime != Regime::NS) throw ConfigError("predict-failure needs draws from an NS fit");
  const json q = load_json(o.config);
  const std::string ctx = "predict_failure";
  check_keys(q, {"intervention", "n_mc", "seed", "comment"}, ctx);
  const json& iv = q.at("intervention");
  check_keys(iv, {"x_S", "x_T", "x_P", "x_H"}, ctx + ".intervention");
  Intervention intervention;
  intervention.x_S = get<int>(iv, "x_S", ctx);
  intervention.x_T = get<int>(iv, "x_T", ctx);
  intervention.x_P = get<int>(iv, "x_P", ctx);
  if (iv.contains("x_H")) intervention.x_H = humidity_from(get<int>(iv, "x_H", ctx), o.coding);
  intervention.validate(b.spec.card);
  std::uint64_t seed = get_or<std::uint64_t>(q, "seed", 1, ctx);
  if (o.seed_set) seed = o.seed;
  const auto n_mc = get_or<std::size_t>(q, "n_mc", 0, ctx);

  const FailureTimeResult r = predictive_failure_time(intervention, b.draws, b.spec.constants, seed, n_mc);
  std::ostringstream csv;
  csv << "draw,w_f\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) csv << i + 1 << ',' << format6(r.values[i]) << '\n';
  io::write_text(o.out, csv.str());
  const auto& t = r.table;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "do(%d,%d,%d) failure time (kilohours), %zu draws, %zu flagged\n"
                "min %.3f  q05 %.3f  q25 %.3f  q50 %.3f  q75 %.3f  q95 %.3f  max %.3f  mean %.3f  sd %.3f\n",
                *intervention.x_S, *intervention.x_T, *intervention.x_P, r.values.size(), r.flagged, t.min, t.q05,
                t.q25, t.q50, t.q75, t.q95, t.max, t.mean, t.sd);
  os << buf;
  write_summary(o.out, {{"seed", seed}, {"flagged", r.flagged}, {"draws", r.values.size()}, {"table", quantiles_json(t)}},
                os);
  return kExitOk;
}

DeviceRecord record_from(const json& q, const Options& o) {
  const std::string ctx = "counterfactual";
  if (q.contains("record") == q.contains("dataset")) {
    throw ConfigError(ctx + ": give exactly one of 'record' and 'dataset' + 'id'");
  }
  if (q.contains("dataset")) {
    const auto id = get<std::string>(q, "id", ctx);
    for (auto& r : io::load_dataset(resolve(get<std::string>(q, "dataset", ctx), o.config))) {
      if (r.id == id) return r;
    }
    throw ConfigError(ctx + ": no device '" + id + "' in the dataset");
  }
  const json& j = q.at("record");
  check_keys(j, {"id", "regime", "config", "w", "y"}, ctx + ".record");
  DeviceRecord r;
  r.id = get_or<std::string>(j, "id", "query", ctx);
  r.regime = parse_regime(get<std::string>(j, "regime", ctx));
  r.config = config_from(j.at("config"), o.coding, ctx + ".record.config");
  const auto w = get<std::vector<double>>(j, "w", ctx);
  const auto y = get<std::vector<double>>(j, "y", ctx);
  if (w.size() != y.size() || w.empty() || w.size() > 4) throw ConfigError(ctx + ".record: w and y need 1..4 equal-length entries");
  for (std::size_t t = 0; t < w.size(); ++t) {
    r.times[t] = w[t];
    r.resistances[t] = y[t];
  }
  try {
    r.validate();
  } catch (const DataError& e) {
    throw ConfigError(ctx + ".record: " + e.what());
  }
  return r;
}

int cmd_counterfactual(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  const io::DrawsBundle b = load_checked_draws(o);
  const json q = load_json(o.config);
  const std::string ctx = "counterfactual";
  check_keys(q, {"record", "dataset", "id", "question", "target", "time", "humidity", "level", "comment"}, ctx);
  CounterfactualQuery query;
  query.record = record_from(q, o);
  const auto question = get_or<std::string>(q, "question", "outcome", ctx);
  if (question == "outcome") {
    query.question = CounterfactualQuery::Question::OutcomeUnderOverride;
  } else if (question == "failure_time") {
    query.question = CounterfactualQuery::Question::FailureTime;
  } else {
    throw ConfigError(ctx + ".question must be outcome or failure_time");
  }
  query.target = get_or(q, "target", 3, ctx);
  if (q.contains("time")) query.time = get<double>(q, "time", ctx);
  if (q.contains("humidity")) query.humidity = humidity_from(get<int>(q, "humidity", ctx), o.coding);
  if (query.record.regime != b.spec.regime) throw ConfigError(ctx + ": record regime differs from the fit regime");
  const double level = get_or(q, "level", o.level, ctx);

  const CounterfactualResult r = cf_posterior(query, b.draws, b.spec.constants, level);
  std::ostringstream csv;
  csv << "draw,value\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) csv << i + 1 << ',' << format6(r.values[i]) << '\n';
  io::write_text(o.out, csv.str());
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "device %s, %s: mean %.6f  median %.6f  sd %.6f  q05 %.6f  q95 %.6f  hdi(%.2f) [%.6f, %.6f]  failed "
                "draws %zu\n",
                query.record.id.c_str(), question.c_str(), r.mean, r.median, r.sd, r.quantiles.q05, r.quantiles.q95,
                level, r.hdi.lo, r.hdi.hi, r.failed);
  os << buf;
  write_summary(o.out,
                {{"id", query.record.id},
                 {"question", question},
                 {"mean", r.mean},
                 {"median", r.median},
                 {"sd", r.sd},
                 {"quantiles", quantiles_json(r.quantiles)},
                 {"hdi", {r.hdi.lo, r.hdi.hi}},
                 {"level", level},
                 {"failed", r.failed}},
                os);
  return kExitOk;
}

int cmd_plot_data(const Options& o, std::ostream& os) {
  if (o.config.empty()) throw ConfigError("--config is required");
  require_out(o);
  const io::DrawsBundle b = load_checked_draws(o);
  const json q = load_json(o.config);
  const std::string ctx = "plot";
  check_keys(q, {"kind", "regime", "configs", "y0", "times", "grid", "level", "comment"}, ctx);
  const auto kind = get<std::string>(q, "kind", ctx);
  const Regime regime = q.contains("regime") ? parse_regime(get<std::string>(q, "regime", ctx)) : b.spec.regime;
  const double level = get_or(q, "level", o.level, ctx);
  const auto grid = grid_from(q, ctx);
  const std::optional<double> y0 = q.contains("y0") ? std::optional<double>(get<double>(q, "y0", ctx)) : std::nullopt;
  const auto thetas = draw_params(b.draws);
  if (!q.at("configs").is_array() || q.at("configs").empty()) throw ConfigError("plot.configs: non-empty array expected");

  std::ostringstream csv;
  csv << "config,t,mean,hdi_lo,hdi_hi\n";
  std::vector<double> values(thetas.size());
  std::size_t rows = 0;
  for (const auto& cj : q.at("configs")) {
    const Configuration config = config_from(cj, o.coding, ctx + ".configs");
    validate(config, b.spec.card);
    for (double t : grid) {
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (kind == "reliability") {
          values[i] = y0 ? reliability_known_y0(t, *y0, config, regime, thetas[i], b.spec.constants)
                         : reliability_unknown_y0(t, config, regime, thetas[i], b.spec.constants);
        } else if (kind == "degradation") {
          values[i] = mean_increment(config, t, regime, thetas[i], b.spec.constants);
        } else {
          throw ConfigError("plot.kind must be reliability or degradation");
        }
      }
      const Summary s = summarize_values(values, level);
      csv << '"' << label(config) << "\"," << format6(t) << ',' << format6(s.mean) << ',' << format6(s.hdi.lo) << ','
          << format6(s.hdi.hi) << '\n';
      ++rows;
    }
  }
  io::write_text(o.out, csv.str());
  os << kind << " plot data: " << rows << " rows -> " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian structural causal model of resistance degradation", "relscm"};
  app.require_subcommand(1);
  Options o;
  std::string coding = "class";

  auto add_common = [&](CLI::App* sub) {
    auto* seed = sub->add_option("--seed", o.seed, "Override the seed from the config");
    sub->callback([&o, seed] { o.seed_set = seed->count() > 0; });
    sub->add_option("--config", o.config, "JSON config or query file");
    sub->add_option("--out", o.out, "Output path");
    sub->add_flag("--allow-unconverged", o.allow_unconverged, "Proceed with draws that failed diagnostics");
    sub->add_option("--humidity-coding", coding, "Humidity values in queries: class (-1/+1) or index (1/2)")
        ->check(CLI::IsMember({"class", "index"}));
  };

  std::map<std::string, std::function<int(const Options&, std::ostream&)>> commands;
  auto add = [&](const std::string& name, const std::string& help, auto fn, bool draws, bool data = false) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (draws) sub->add_option("--draws", o.draws, "Draws CSV written by fit");
    if (data) sub->add_option("--data", o.data, "Dataset CSV (overrides the config)");
    if (draws) sub->add_option("--level", o.level, "Interval level")->check(CLI::Range(0.0, 1.0));
    commands[name] = fn;
  };
  add("generate", "Generate a synthetic dataset", cmd_generate, false);
  add("fit", "Sample the posterior", cmd_fit, false, true);
  add("diagnose", "Convergence diagnostics of a draws file", cmd_diagnose, true);
  add("summarize", "Posterior mean, sd and HDI of every parameter", cmd_summarize, true);
  add("estimand", "Expected increase and contrasts", cmd_estimand, true);
  add("reliability", "Posterior reliability curve", cmd_reliability, true);
  add("predict-failure", "Predictive failure time under an intervention", cmd_predict_failure, true);
  add("counterfactual", "Counterfactual query on one device", cmd_counterfactual, true);
  add("plot-data", "Reliability or degradation grids for plotting", cmd_plot_data, true);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  o.coding = coding == "index" ? HumidityCoding::Index : HumidityCoding::Class;

  try {
    for (const auto* sub : app.get_subcommands()) return commands.at(sub->get_name())(o, out);
    return kExitInput;
  } catch (const QualityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitQuality;
  } catch (const DrawFailureError& e) {
    err << "error: " << e.what() << "\n";
    return kExitQuality;
  } catch (const AdaptationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitQuality;
  } catch (const ConfigError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DataError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CardinalityError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace relscm::cli
