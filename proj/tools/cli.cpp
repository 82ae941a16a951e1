#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "herdbook/calibrate/calibrate.hpp"
#include "herdbook/core/error.hpp"
#include "herdbook/core/parallel.hpp"
#include "herdbook/core/rng.hpp"
#include "herdbook/ingest/ingest.hpp"
#include "herdbook/io/config.hpp"
#include "herdbook/io/files.hpp"
#include "herdbook/model/params.hpp"
#include "herdbook/model/simulation.hpp"
#include "herdbook/sde/sde.hpp"
#include "herdbook/stats/compare.hpp"
#include "herdbook/stats/estimators.hpp"
#include "herdbook/stats/pipeline.hpp"
#include "herdbook/stats/transforms.hpp"

#ifndef HERDBOOK_VERSION
#define HERDBOOK_VERSION "unknown"
#endif

namespace herdbook::cli {

namespace {

namespace fs = std::filesystem;
using Range = std::pair<double, double>;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Range parse_range(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError(what + " must be lo,hi");
  const Range r{io::parse_double(parts[0], what), io::parse_double(parts[1], what)};
  if (!(r.first > 0 && r.first < r.second)) throw ConfigError(what + " must satisfy 0 < lo < hi");
  return r;
}

std::string fmt(double v) { return std::isfinite(v) ? io::format_double(v) : "nan"; }

// Model configuration shared by simulate, sweep and calibrate.
struct ModelOptions {
  std::string config;
  std::string preset;
  std::vector<std::string> sets;
};

void add_model_options(CLI::App* cmd, ModelOptions& o) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--preset", o.preset, "base parameter set: fig3, btc or nyse; config keys override it");
  cmd->add_option("--set", o.sets, "key=value override, applied after the file (last one wins)");
}

io::ResolvedConfig load_config(const ModelOptions& o) {
  io::KeyValues kv;
  if (!o.config.empty()) kv = io::read_key_values(o.config);
  for (const auto& s : o.sets) io::apply_override(kv, s);
  std::optional<model::ModelParams> base;
  if (o.preset == "fig3") base = model::fig3_params();
  else if (o.preset == "btc") base = model::btc_fit_params();
  else if (o.preset == "nyse") base = model::nyse_fit_params();
  else if (!o.preset.empty()) throw ConfigError("unknown preset '" + o.preset + "' (fig3, btc, nyse)");
  return io::resolve_config(kv, base);
}

void add_curve_options(CLI::App* cmd, stats::CurveSettings& s) {
  cmd->add_option("--lag", s.return_lag, "return lag in samples")->capture_default_str();
  cmd->add_option("--pdf-bins", s.pdf_bins_per_decade, "PDF bins per decade")->capture_default_str();
  cmd->add_option("--segment", s.psd_segment_length, "PSD segment length in samples")->capture_default_str();
  cmd->add_option("--overlap", s.psd_overlap, "PSD segment overlap fraction")->capture_default_str();
  cmd->add_option("--psd-bins", s.psd_bins_per_decade, "PSD points per decade after binning")->capture_default_str();
  cmd->add_option("--return-divisor", s.return_scale_divisor, "divide normalized returns by this")
      ->capture_default_str();
}

struct Manifest {
  io::RunManifest m;
  fs::path dir;

  Manifest(std::string command, fs::path d) : dir(std::move(d)) {
    m.command = std::move(command);
    m.version = HERDBOOK_VERSION;
    m.started = io::utc_now();
    fs::create_directories(dir);
  }
  void finish() {
    m.finished = io::utc_now();
    io::write_manifest(dir, m);
  }
};

void put_config(io::RunManifest& m, const io::ResolvedConfig& cfg) {
  for (const auto& [k, v] : io::to_key_values(cfg)) m.config[k] = v;
  m.seed = cfg.run.seed;
}

void put_curve_settings(io::RunManifest& m, const stats::CurveSettings& s) {
  m.config["return_lag"] = std::to_string(s.return_lag);
  m.config["pdf_bins_per_decade"] = std::to_string(s.pdf_bins_per_decade);
  m.config["psd_segment_length"] = std::to_string(s.psd_segment_length);
  m.config["psd_overlap"] = io::format_double(s.psd_overlap);
  m.config["psd_bins_per_decade"] = std::to_string(s.psd_bins_per_decade);
  m.config["return_scale_divisor"] = io::format_double(s.return_scale_divisor);
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  ModelOptions model;
  std::string out;
  bool trade_log = false;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  auto cfg = load_config(o.model);
  cfg.run.keep_trade_log = o.trade_log;
  Manifest man("simulate", o.out);
  put_config(man.m, cfg);

  const auto result = model::run_simulation(cfg.params, cfg.run);
  io::write_series_csv(man.dir / "series.csv", result.price, result.trades);
  man.m.outputs.emplace_back("series.csv");
  if (o.trade_log) {
    io::write_trade_log_csv(man.dir / "trades.csv", result.trade_log);
    man.m.outputs.emplace_back("trades.csv");
  }
  io::write_text_atomic(man.dir / "config.txt", io::format_key_values(io::to_key_values(cfg)));
  man.m.outputs.emplace_back("config.txt");
  man.finish();

  out << "windows " << result.price.size() << ", trades " << result.counters.trades << ", events ";
  std::uint64_t events = 0;
  for (auto e : result.counters.events) events += e;
  out << events << (result.frozen ? ", market froze before the horizon" : "") << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- stats

struct StatsOptions {
  std::string series;
  std::string out;
  stats::CurveSettings curves;
};

int cmd_stats(const StatsOptions& o, std::ostream& out) {
  const auto s = io::read_series_csv(o.series);
  const auto set = stats::compute_curve_set(s.price, s.trades, o.curves);
  Manifest man("stats", o.out);
  man.m.config["series"] = o.series;
  put_curve_settings(man.m, o.curves);
  man.m.outputs = io::write_target(man.dir, calibrate::target_from_curves(set));
  man.finish();
  out << "curves written to " << o.out << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct FitRanges {
  std::string return_pdf = "1,100";
  std::string return_psd = "1e-5,1e-3";
  std::string activity_pdf = "1,10";
  std::string activity_psd = "1e-5,1e-3";
};

struct SweepOptions {
  ModelOptions model;
  std::string param;
  std::string values;
  std::string hold;
  std::string out;
  bool common_seed = false;
  stats::CurveSettings curves;
  FitRanges fits;
};

double slope_or_nan(const stats::StatCurve& c, Range r) {
  try {
    return stats::loglog_slope(c, r.first, r.second).slope;
  } catch (const DataError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

int cmd_sweep(const SweepOptions& o, int threads, std::ostream& out, std::ostream& err) {
  if (!model::is_param_name(o.param)) throw ConfigError("unknown sweep parameter '" + o.param + "'");
  const auto hold = split(o.hold, ',');
  for (const auto& h : hold) {
    if (!model::is_param_name(h)) throw ConfigError("unknown parameter '" + h + "' in --hold-product");
    if (h == o.param) throw ConfigError("--hold-product cannot include the swept parameter");
  }
  std::vector<double> values;
  for (const auto& v : split(o.values, ',')) values.push_back(io::parse_double(v, "--values"));
  if (values.empty()) throw ConfigError("--values is empty");
  const std::array<Range, 4> ranges = {parse_range(o.fits.return_pdf, "--fit-return-pdf"),
                                       parse_range(o.fits.return_psd, "--fit-return-psd"),
                                       parse_range(o.fits.activity_pdf, "--fit-activity-pdf"),
                                       parse_range(o.fits.activity_psd, "--fit-activity-psd")};

  const auto cfg = load_config(o.model);
  const double base_value = model::get_param(cfg.params, o.param);
  std::vector<model::ModelParams> params(values.size(), cfg.params);
  for (std::size_t i = 0; i < values.size(); ++i) {
    model::set_param(params[i], o.param, values[i]);
    for (const auto& h : hold) {
      if (values[i] == 0) throw ConfigError("--hold-product needs nonzero sweep values");
      model::set_param(params[i], h, model::get_param(cfg.params, h) * base_value / values[i]);
    }
    params[i].validate();
  }

  Manifest man("sweep", o.out);
  put_config(man.m, cfg);
  put_curve_settings(man.m, o.curves);
  man.m.config["sweep_param"] = o.param;
  man.m.config["sweep_values"] = o.values;
  man.m.config["hold_product"] = o.hold;
  man.m.config["common_seed"] = o.common_seed ? "true" : "false";

  struct Row {
    std::uint64_t seed = 0;
    std::array<double, 4> slopes{};
    std::string status = "ok";
  };
  std::vector<Row> rows(values.size());
  parallel_for(values.size(), threads, [&](std::size_t i) {
    model::RunConfig run = cfg.run;
    run.seed = o.common_seed ? cfg.run.seed : derive_seed(cfg.run.seed, i);
    rows[i].seed = run.seed;
    const auto result = model::run_simulation(params[i], run);
    const fs::path dir = man.dir / ("run_" + std::to_string(i));
    io::write_series_csv(dir / "series.csv", result.price, result.trades);
    try {
      const auto set = stats::compute_curve_set(result.price, result.trades, o.curves);
      io::write_target(dir, calibrate::target_from_curves(set));
      const auto curves = calibrate::curves_of(set);
      for (std::size_t c = 0; c < 4; ++c) rows[i].slopes[c] = slope_or_nan(*curves[c], ranges[c]);
    } catch (const DegenerateSeriesError& e) {
      rows[i].slopes.fill(std::numeric_limits<double>::quiet_NaN());
      rows[i].status = "degenerate";
    }
  });

  std::ostringstream csv;
  csv << "index,value,seed,return_pdf_slope,return_psd_slope,activity_pdf_slope,activity_psd_slope,status\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv << i << ',' << io::format_double(values[i]) << ',' << rows[i].seed;
    for (double s : rows[i].slopes) csv << ',' << fmt(s);
    csv << ',' << rows[i].status << '\n';
    const fs::path rel = "run_" + std::to_string(i);
    man.m.outputs.push_back(rel / "series.csv");
    if (rows[i].status == "ok") {
      for (auto name : calibrate::kCurveNames) {
        man.m.outputs.push_back(rel / (std::string(name) + ".csv"));
        man.m.outputs.push_back(rel / (std::string(name) + ".json"));
      }
    } else {
      err << "warning: run " << i << " produced a degenerate series\n";
    }
  }
  io::write_text_atomic(man.dir / "summary.csv", csv.str());
  man.m.outputs.emplace_back("summary.csv");
  man.finish();
  out << csv.str();
  return kExitOk;
}

// --------------------------------------------------------------- calibrate

struct CalibrateOptions {
  ModelOptions model;
  std::string target;
  std::string out;
  std::string free;
  std::vector<std::string> bounds;
  int iterations = 300;
  double temperature = 0.05;
  double cooling = 0.98;
  double scale = 0.3;
  int replicas = 1;
  std::string aggregation = "max";
  std::optional<std::uint64_t> seed;
  stats::CurveSettings curves;
};

int cmd_calibrate(const CalibrateOptions& o, int threads, std::ostream& out) {
  const auto cfg = load_config(o.model);
  calibrate::AnnealingConfig ac;
  ac.initial = cfg.params;
  ac.bounds = calibrate::default_bounds(cfg.params);
  if (!o.free.empty()) {
    for (auto& [name, b] : ac.bounds) b.frozen = true;
    for (const auto& name : split(o.free, ',')) {
      if (!model::is_param_name(name)) throw ConfigError("unknown parameter '" + name + "' in --free");
      ac.bounds[name].frozen = false;
    }
  }
  for (const auto& spec : o.bounds) {
    const auto eq = spec.find('=');
    const auto colon = spec.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) throw ConfigError("--bound must be name=lo:hi");
    const std::string name = spec.substr(0, eq);
    if (!model::is_param_name(name)) throw ConfigError("unknown parameter '" + name + "' in --bound");
    ac.bounds[name].lo = io::parse_double(spec.substr(eq + 1, colon - eq - 1), name);
    ac.bounds[name].hi = io::parse_double(spec.substr(colon + 1), name);
  }
  ac.iterations = o.iterations;
  ac.initial_temperature = o.temperature;
  ac.cooling = o.cooling;
  ac.proposal_scale = o.scale;
  ac.seed = o.seed.value_or(cfg.run.seed);
  ac.objective.run = cfg.run;
  ac.objective.curves = o.curves;
  ac.objective.replicas = o.replicas;
  ac.objective.threads = threads;
  if (o.aggregation == "max") ac.objective.aggregation = calibrate::Aggregation::Max;
  else if (o.aggregation == "mean") ac.objective.aggregation = calibrate::Aggregation::Mean;
  else throw ConfigError("--aggregation must be max or mean");
  ac.validate();

  const auto target = io::read_target(o.target);
  Manifest man("calibrate", o.out);
  put_config(man.m, cfg);
  put_curve_settings(man.m, o.curves);
  man.m.seed = ac.seed;
  man.m.config["target"] = o.target;
  man.m.config["iterations"] = std::to_string(ac.iterations);
  man.m.config["initial_temperature"] = io::format_double(ac.initial_temperature);
  man.m.config["cooling"] = io::format_double(ac.cooling);
  man.m.config["proposal_scale"] = io::format_double(ac.proposal_scale);
  man.m.config["replicas"] = std::to_string(ac.objective.replicas);
  man.m.config["aggregation"] = o.aggregation;
  for (const auto& [name, b] : ac.bounds) {
    if (!b.frozen) man.m.config["bound_" + name] = io::format_double(b.lo) + ":" + io::format_double(b.hi);
  }

  const auto result = calibrate::anneal(ac, target);

  std::ostringstream trace;
  trace << "iteration,temperature,parameter,proposed_value,objective,accepted,current_objective,best_objective\n";
  for (const auto& e : result.trace) {
    trace << e.iteration << ',' << fmt(e.temperature) << ',' << e.parameter << ','
          << (e.parameter.empty() ? "" : fmt(e.proposed_value)) << ',' << fmt(e.objective) << ','
          << (e.accepted ? 1 : 0) << ',' << fmt(e.current_objective) << ',' << fmt(e.best_objective) << '\n';
  }
  io::write_text_atomic(man.dir / "trace.csv", trace.str());

  nlohmann::json best = nlohmann::json::object();
  for (auto name : model::kParamNames) best[std::string(name)] = model::get_param(result.best, name);
  std::vector<std::string> free_names;
  for (const auto& [name, b] : ac.bounds)
    if (!b.frozen) free_names.push_back(name);
  const nlohmann::json j = {
      {"best_params", best},
      {"best_objective", result.best_objective},
      {"initial_objective", result.trace.front().objective},
      {"iterations", ac.iterations},
      {"accepted", result.accepted},
      {"acceptance_rate", ac.iterations > 0 ? static_cast<double>(result.accepted) / ac.iterations : 0.0},
      {"free_parameters", free_names},
      {"aggregation", o.aggregation},
  };
  io::write_text_atomic(man.dir / "result.json", j.dump(2) + "\n");
  io::ResolvedConfig best_cfg = cfg;
  best_cfg.params = result.best;
  io::write_text_atomic(man.dir / "best.cfg", io::format_key_values(io::to_key_values(best_cfg)));
  man.m.outputs = {"trace.csv", "result.json", "best.cfg"};
  man.finish();

  out << "best objective " << io::format_double(result.best_objective) << " after " << ac.iterations
      << " iterations (" << result.accepted << " accepted)\n";
  return kExitOk;
}

// ------------------------------------------------------------------ ingest

struct IngestOptions {
  std::vector<std::string> inputs;
  std::string out;
  bool header = false;
  std::string columns = "0,1,2";
  std::optional<std::int64_t> t_start;
  std::optional<std::int64_t> t_end;
  double interval = 60.0;
  bool drop_gaps = false;
  double max_malformed = 0.01;
  stats::CurveSettings curves;
};

int cmd_ingest(const IngestOptions& o, std::ostream& out, std::ostream& err) {
  ingest::TickFormat format;
  format.header = o.header;
  format.max_malformed_fraction = o.max_malformed;
  const auto cols = split(o.columns, ',');
  if (cols.size() != 3) throw ConfigError("--columns must list the time, price and amount column indices");
  try {
    format.time_column = std::stoi(cols[0]);
    format.price_column = std::stoi(cols[1]);
    format.amount_column = std::stoi(cols[2]);
  } catch (const std::exception&) {
    throw ConfigError("--columns must be three integers");
  }
  ingest::MinuteOptions mo{o.interval, o.drop_gaps};

  Manifest man("ingest", o.out);
  man.m.config["columns"] = o.columns;
  man.m.config["header"] = o.header ? "true" : "false";
  man.m.config["interval_s"] = io::format_double(o.interval);
  man.m.config["drop_gaps"] = o.drop_gaps ? "true" : "false";
  put_curve_settings(man.m, o.curves);

  std::vector<ingest::MinuteSeries> assets;
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    std::ifstream in(o.inputs[i]);
    if (!in) throw DataError("cannot open '" + o.inputs[i] + "'");
    auto parsed = ingest::parse_ticks(in, format);
    for (const auto& w : parsed.report.warnings) err << "warning: " << o.inputs[i] << ": " << w << '\n';
    if (parsed.ticks.empty()) throw DataError(o.inputs[i] + ": no valid ticks");
    const auto w = static_cast<std::int64_t>(std::ceil(o.interval));
    const std::int64_t first = parsed.ticks.front().t;
    const std::int64_t last = parsed.ticks.back().t;
    const std::int64_t start = o.t_start.value_or(first - ((first % w) + w) % w);
    const std::int64_t end = o.t_end.value_or(start + ((last - start) / w + 1) * w);
    assets.push_back(ingest::to_minute_series(parsed.ticks, start, end, mo));
    man.m.config["input_" + std::to_string(i)] = o.inputs[i];
    man.m.config["t_start_" + std::to_string(i)] = std::to_string(start);
    man.m.config["t_end_" + std::to_string(i)] = std::to_string(end);
    const std::string name = o.inputs.size() == 1 ? "series.csv" : "series_" + std::to_string(i) + ".csv";
    io::write_series_csv(man.dir / name, assets.back().price, assets.back().trades);
    man.m.outputs.emplace_back(name);
    out << o.inputs[i] << ": " << parsed.ticks.size() << " ticks, " << parsed.report.malformed << " malformed, "
        << assets.back().price.size() << " windows\n";
  }
  const auto target = ingest::empirical_target(assets, o.curves);
  for (auto& f : io::write_target(man.dir, target)) man.m.outputs.push_back(f);
  man.finish();
  return kExitOk;
}

// --------------------------------------------------------------------- sde

struct SdeOptions {
  std::string which;
  std::vector<std::string> sets;
  double dt = 1e-3;
  double horizon = 1e3;
  std::optional<double> sample_interval;
  std::uint64_t seed = 1;
  int n_agents = 500;
  bool extensive = false;
  double burn_in = 0.0;
  std::string out;
};

void write_histogram(const fs::path& path, std::span<const double> values, int bins) {
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    const auto b = std::min(static_cast<std::size_t>(bins) - 1, static_cast<std::size_t>(std::max(0.0, v) * bins));
    counts[b] += 1;
  }
  std::ostringstream os;
  os << "bin_lo,bin_hi,density\n";
  for (int b = 0; b < bins; ++b) {
    os << fmt(static_cast<double>(b) / bins) << ',' << fmt(static_cast<double>(b + 1) / bins) << ','
       << fmt(counts[static_cast<std::size_t>(b)] * bins / static_cast<double>(values.size())) << '\n';
  }
  io::write_text_atomic(path, os.str());
}

int cmd_sde(const SdeOptions& o, std::ostream& out) {
  io::KeyValues kv;
  for (const auto& s : o.sets) io::apply_override(kv, s);
  std::vector<std::string> allowed;
  if (o.which == "kirman" || o.which == "agents") allowed = {"eps1", "eps2", "h", "sigma1", "sigma2", "n_extensive"};
  else if (o.which == "y") allowed = {"eps_fc", "eps_cf", "alpha", "h", "y_min", "y_max", "ds", "y0"};
  else if (o.which == "bass") allowed = {"sigma1", "h", "x0"};
  else throw ConfigError("--which must be kirman, agents, y or bass");
  for (const auto& [k, v] : kv) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown key '" + k + "' for --which " + o.which);
  }
  auto get = [&](const std::string& k, double fallback) {
    const auto it = kv.find(k);
    return it == kv.end() ? fallback : io::parse_double(it->second, k);
  };
  auto get_opt = [&](const std::string& k) -> std::optional<double> {
    const auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return io::parse_double(it->second, k);
  };

  Manifest man("sde", o.out);
  man.m.seed = o.seed;
  man.m.config["which"] = o.which;
  man.m.config["dt"] = io::format_double(o.dt);
  man.m.config["horizon"] = io::format_double(o.horizon);
  for (const auto& [k, v] : kv) man.m.config[k] = v;

  stats::SampledSeries series;
  if (o.which == "kirman" || o.which == "agents") {
    sde::KirmanSdeParams p;
    p.eps1 = get("eps1", 1.0);
    p.eps2 = get("eps2", 1.0);
    p.h = get("h", 1.0);
    p.sigma1 = get_opt("sigma1");
    p.sigma2 = get_opt("sigma2");
    p.n_extensive = static_cast<int>(get("n_extensive", 0));
    if (o.which == "kirman") {
      series = sde::integrate_kirman_x(p, o.dt, o.horizon, o.seed, o.sample_interval);
    } else {
      man.m.config["n_agents"] = std::to_string(o.n_agents);
      man.m.config["extensive"] = o.extensive ? "true" : "false";
      series = sde::simulate_kirman_agents(p, o.n_agents, o.extensive, o.horizon, o.sample_interval.value_or(o.dt),
                                           o.burn_in, o.seed);
    }
  } else if (o.which == "y") {
    sde::YSdeParams p;
    p.eps_fc = get("eps_fc", 1.0);
    p.eps_cf = get("eps_cf", 2.0);
    p.alpha = get("alpha", 1.0);
    p.h = get("h", 1.0);
    sde::YClip clip{get("y_min", 1e-4), get("y_max", 1e4)};
    sde::YStepControl step;
    step.ds = get("ds", step.ds);
    step.y0 = get_opt("y0");
    series = sde::integrate_y(p, o.sample_interval.value_or(o.dt), o.horizon, o.seed, clip, step);
  } else {
    series = sde::bass_trajectory(get("sigma1", 1.0), get("h", 0.0), get("x0", 0.0), o.dt, o.horizon);
  }

  io::write_values_csv(man.dir / "series.csv", series);
  man.m.outputs.emplace_back("series.csv");
  if (o.which == "y") {
    io::write_curve(man.dir / "pdf", stats::pdf_log_bins(series, 10));
    man.m.outputs.emplace_back("pdf.csv");
    man.m.outputs.emplace_back("pdf.json");
  } else {
    write_histogram(man.dir / "histogram.csv", series.values, 20);
    man.m.outputs.emplace_back("histogram.csv");
  }
  man.finish();
  out << "samples " << series.size() << ", mean " << fmt(stats::mean(series.values)) << ", std "
      << fmt(stats::population_std(series.values)) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order book model with herd behavior: simulation, statistics and calibration"};
  app.set_version_flag("--version", HERDBOOK_VERSION);
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "maximum number of parallel workers")->capture_default_str();

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "run the model and write the sampled series");
  add_model_options(c_sim, sim.model);
  c_sim->add_option("--out", sim.out, "output directory")->required();
  c_sim->add_flag("--trade-log", sim.trade_log, "also write every executed trade");

  StatsOptions st;
  auto* c_stats = app.add_subcommand("stats", "compute return and activity PDF/PSD curves of a series file");
  c_stats->add_option("--series", st.series, "series CSV (t_s,price,trades)")->required();
  c_stats->add_option("--out", st.out, "output directory")->required();
  add_curve_options(c_stats, st.curves);

  SweepOptions sw;
  auto* c_sweep = app.add_subcommand("sweep", "simulate and analyse one run per parameter value");
  add_model_options(c_sweep, sw.model);
  c_sweep->add_option("--param", sw.param, "parameter to vary")->required();
  c_sweep->add_option("--values", sw.values, "comma separated values")->required();
  c_sweep->add_option("--hold-product", sw.hold, "parameters whose product with the swept one stays fixed");
  c_sweep->add_option("--out", sw.out, "output directory")->required();
  c_sweep->add_flag("--common-seed", sw.common_seed, "use the configured seed for every value");
  c_sweep->add_option("--fit-return-pdf", sw.fits.return_pdf, "slope fit range lo,hi")->capture_default_str();
  c_sweep->add_option("--fit-return-psd", sw.fits.return_psd, "slope fit range lo,hi")->capture_default_str();
  c_sweep->add_option("--fit-activity-pdf", sw.fits.activity_pdf, "slope fit range lo,hi")->capture_default_str();
  c_sweep->add_option("--fit-activity-psd", sw.fits.activity_psd, "slope fit range lo,hi")->capture_default_str();
  add_curve_options(c_sweep, sw.curves);

  CalibrateOptions ca;
  auto* c_cal = app.add_subcommand("calibrate", "fit parameters to target curves by simulated annealing");
  add_model_options(c_cal, ca.model);
  c_cal->add_option("--target", ca.target, "directory with the four target curves")->required();
  c_cal->add_option("--out", ca.out, "output directory")->required();
  c_cal->add_option("--free", ca.free, "comma separated free parameters (default: all but N, lambda_e, k, theta, P_f)");
  c_cal->add_option("--bound", ca.bounds, "name=lo:hi bounds for a free parameter");
  c_cal->add_option("--iterations", ca.iterations)->capture_default_str();
  c_cal->add_option("--temperature", ca.temperature, "initial temperature")->capture_default_str();
  c_cal->add_option("--cooling", ca.cooling, "geometric cooling ratio")->capture_default_str();
  c_cal->add_option("--scale", ca.scale, "proposal scale")->capture_default_str();
  c_cal->add_option("--replicas", ca.replicas, "simulations per evaluation")->capture_default_str();
  c_cal->add_option("--aggregation", ca.aggregation, "max or mean over the four curves")->capture_default_str();
  c_cal->add_option("--seed", ca.seed, "annealing seed (default: the config seed)");
  add_curve_options(c_cal, ca.curves);

  IngestOptions in;
  auto* c_in = app.add_subcommand("ingest", "turn tick files into minute series and averaged curves");
  c_in->add_option("--input", in.inputs, "tick CSV (unixtime,price,amount); repeat for several assets")->required();
  c_in->add_option("--out", in.out, "output directory")->required();
  c_in->add_flag("--header", in.header, "the first line is a header");
  c_in->add_option("--columns", in.columns, "time,price,amount column indices")->capture_default_str();
  c_in->add_option("--t-start", in.t_start, "first window start (unix seconds)");
  c_in->add_option("--t-end", in.t_end, "end of the last window (unix seconds)");
  c_in->add_option("--interval", in.interval, "window length in seconds")->capture_default_str();
  c_in->add_flag("--drop-gaps", in.drop_gaps, "drop windows without trades");
  c_in->add_option("--max-malformed", in.max_malformed, "tolerated fraction of bad lines")->capture_default_str();
  add_curve_options(c_in, in.curves);

  SdeOptions sd;
  auto* c_sde = app.add_subcommand("sde", "reference SDE, ODE and agent-level herding paths");
  c_sde->add_option("--which", sd.which, "kirman, agents, y or bass")->required();
  c_sde->add_option("--set", sd.sets, "key=value model setting");
  c_sde->add_option("--dt", sd.dt, "time step (sampling interval for y)")->capture_default_str();
  c_sde->add_option("--horizon", sd.horizon)->capture_default_str();
  c_sde->add_option("--sample-interval", sd.sample_interval);
  c_sde->add_option("--seed", sd.seed)->capture_default_str();
  c_sde->add_option("--n-agents", sd.n_agents, "agents for --which agents")->capture_default_str();
  c_sde->add_flag("--extensive", sd.extensive, "extensive herding for --which agents");
  c_sde->add_option("--burn-in", sd.burn_in, "burn-in for --which agents")->capture_default_str();
  c_sde->add_option("--out", sd.out, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_stats->parsed()) return cmd_stats(st, out);
    if (c_sweep->parsed()) return cmd_sweep(sw, threads, out, err);
    if (c_cal->parsed()) return cmd_calibrate(ca, threads, out);
    if (c_in->parsed()) return cmd_ingest(in, out, err);
    if (c_sde->parsed()) return cmd_sde(sd, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace herdbook::cli
