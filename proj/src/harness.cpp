#include "fluidnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace fluidnet {

BaselineMode parse_baseline_mode(const std::string& text) {
  if (text == "fa" || text == "FA") return BaselineMode::FluidAntenna;
  if (text == "fpa" || text == "FPA" || text == "fpa-diagonal") return BaselineMode::FixedDiagonal;
  fail(ErrorCode::Configuration, "unknown baseline mode '" + text + "' (expected fa or fpa)");
}

std::string to_string(BaselineMode mode) {
  return mode == BaselineMode::FluidAntenna ? "fa" : "fpa";
}

SweepVariable parse_sweep_variable(const std::string& text) {
  if (text == "none") return SweepVariable::None;
  if (text == "alpha") return SweepVariable::Alpha;
  if (text == "M") return SweepVariable::M;
  if (text == "SNR" || text == "snr") return SweepVariable::Snr;
  if (text == "d_model") return SweepVariable::DModel;
  fail(ErrorCode::Configuration, "unknown sweep variable '" + text +
                                     "' (expected alpha, M, SNR, d_model or none)");
}

std::string to_string(SweepVariable var) {
  switch (var) {
    case SweepVariable::None: return "none";
    case SweepVariable::Alpha: return "alpha";
    case SweepVariable::M: return "M";
    case SweepVariable::Snr: return "SNR";
    case SweepVariable::DModel: return "d_model";
  }
  return "none";
}

SystemConfig apply_sweep(const SystemConfig& config, SweepVariable var, double value) {
  SystemConfig c = config;
  switch (var) {
    case SweepVariable::None: break;
    case SweepVariable::Alpha: c.alpha = value; break;
    case SweepVariable::M:
      require(value >= 1 && value == std::floor(value), ErrorCode::Configuration,
              "M sweep values must be positive integers");
      c.M = static_cast<int>(value);
      break;
    case SweepVariable::Snr: c.set_snr_db(value); break;
    case SweepVariable::DModel: c.d_model = {value}; break;
  }
  return c;
}

void ExperimentSpec::validate() const {
  config.validate();
  require(!seeds.empty(), ErrorCode::Configuration, "at least one seed is required");
  require(std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() == seeds.size(),
          ErrorCode::Configuration, "seeds must be distinct");
  require(sweep == SweepVariable::None || !values.empty(), ErrorCode::Configuration,
          "a sweep variable needs at least one value");
  require(!modes.empty(), ErrorCode::Configuration, "at least one baseline mode is required");
}

SingleRun run_single(const SystemConfig& config, std::uint64_t seed,
                     BaselineMode mode, const BcdOptions& options) {
  const SystemConfig cfg = config.normalized();
  cfg.validate();
  SingleRun run;
  run.scenario = sample_scenario(cfg, seed);
  if (mode == BaselineMode::FixedDiagonal) {
    run.scenario.geometry.R = fpa_baseline_geometry(cfg.M, cfg.L, cfg.D_min);
  }
  const ChannelModel model(run.scenario.geometry, run.scenario.angles,
                           run.scenario.gains, cfg.K_rician, cfg.lambda);
  const PowerAllocation powers = equal_power(cfg);
  const ChannelRealization channels = model.build(run.scenario.geometry.R);
  const NetworkState init = initial_state(cfg, channels, run.scenario.geometry.R);
  BcdOptions opts = options;
  if (mode == BaselineMode::FixedDiagonal) opts.update_positions = false;
  run.result = run_bcd(init, model, powers, cfg, opts);
  return run;
}

double mean(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& rows) {
  std::vector<AggregateRecord> out;
  std::vector<std::pair<BaselineMode, double>> keys;
  for (const auto& r : rows) {
    const std::pair key{r.mode, r.sweep_value};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [mode, value] : keys) {
    std::vector<double> loss, lat, ps, its;
    for (const auto& r : rows) {
      if (r.mode != mode || r.sweep_value != value || !r.ok) continue;
      loss.push_back(r.loss);
      lat.push_back(r.latency);
      ps.push_back(r.psnr);
      its.push_back(r.iterations);
    }
    AggregateRecord a;
    a.mode = mode;
    a.sweep_value = value;
    a.runs = static_cast<int>(loss.size());
    a.mean_loss = mean(loss);
    a.median_loss = median(loss);
    a.mean_latency = mean(lat);
    a.median_latency = median(lat);
    a.mean_psnr = mean(ps);
    a.median_psnr = median(ps);
    a.mean_iterations = mean(its);
    a.median_iterations = median(its);
    out.push_back(a);
  }
  return out;
}

int ResultTable::failures() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                        [](const RunRecord& r) { return !r.ok; }));
}

const AggregateRecord* ResultTable::find(BaselineMode mode, double sweep_value) const {
  for (const auto& a : aggregates) {
    if (a.mode == mode && a.sweep_value == sweep_value) return &a;
  }
  return nullptr;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> values =
      spec.sweep == SweepVariable::None ? std::vector<double>{0.0} : spec.values;

  ResultTable table;
  table.sweep = spec.sweep;
  for (BaselineMode mode : spec.modes) {
    for (double v : values) {
      for (std::uint64_t seed : spec.seeds) {
        RunRecord r;
        r.mode = mode;
        r.sweep_value = v;
        r.seed = seed;
        table.rows.push_back(r);
      }
    }
  }

  // Each worker owns its run; results land in preassigned slots.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < table.rows.size(); i = next++) {
      RunRecord& r = table.rows[i];
      try {
        const SystemConfig cfg = apply_sweep(spec.config, spec.sweep, r.sweep_value);
        const SingleRun run = run_single(cfg, r.seed, r.mode, spec.options);
        const auto& res = run.result;
        r.loss = res.breakdown.loss;
        r.latency = res.breakdown.total_latency();
        r.psnr = res.breakdown.total_psnr();
        r.iterations = static_cast<int>(res.trace.iterations.size());
        r.converged = res.trace.converged;
        r.q = res.state.q;
        r.ok = res.breakdown.feasible;
        if (!r.ok) r.error = "infeasible final state (non-positive rate)";
        if (spec.keep_traces) r.trace = res.trace;
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    }
  };
  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(table.rows.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  table.aggregates = aggregate(table.rows);
  return table;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_results_csv(std::ostream& out, const ResultTable& table) {
  std::size_t max_users = 0;
  for (const auto& r : table.rows) max_users = std::max(max_users, r.q.size());
  std::ostringstream os;
  os.precision(17);
  os << "kind,mode,sweep_var,sweep_value,seed,status,loss,latency,psnr,iterations,converged";
  for (std::size_t u = 0; u < max_users; ++u) os << ",q_" << u;
  os << ",error\n";
  const std::string var = to_string(table.sweep);
  for (const auto& r : table.rows) {
    os << "run," << to_string(r.mode) << ',' << var << ',' << r.sweep_value << ','
       << r.seed << ',' << (r.ok ? "ok" : "failed") << ',' << r.loss << ','
       << r.latency << ',' << r.psnr << ',' << r.iterations << ','
       << (r.converged ? 1 : 0);
    for (std::size_t u = 0; u < max_users; ++u) {
      os << ',';
      if (u < r.q.size()) os << r.q[u];
    }
    os << ',' << csv_escape(r.error) << '\n';
  }
  for (const auto& a : table.aggregates) {
    for (const bool is_mean : {true, false}) {
      os << "aggregate," << to_string(a.mode) << ',' << var << ',' << a.sweep_value
         << ',' << (is_mean ? "mean" : "median") << ',' << a.runs << ','
         << (is_mean ? a.mean_loss : a.median_loss) << ','
         << (is_mean ? a.mean_latency : a.median_latency) << ','
         << (is_mean ? a.mean_psnr : a.median_psnr) << ','
         << (is_mean ? a.mean_iterations : a.median_iterations) << ',';
      for (std::size_t u = 0; u < max_users; ++u) os << ',';
      os << ",\n";
    }
  }
  out << os.str();
}

void write_traces_csv(std::ostream& out, const ResultTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "mode,sweep_value,seed,iteration,loss,loss_after_freq,loss_after_quant,"
        "loss_after_beam,loss_after_fa,rel_change\n";
  for (const auto& r : table.rows) {
    const std::string prefix = to_string(r.mode) + ',' + [&] {
      std::ostringstream v;
      v.precision(17);
      v << r.sweep_value << ',' << r.seed;
      return v.str();
    }();
    if (r.trace.iterations.empty()) continue;
    os << prefix << ",0," << r.trace.initial_loss << ",,,,,\n";
    for (const auto& it : r.trace.iterations) {
      os << prefix << ',' << it.iteration << ',' << it.loss << ',' << it.loss_after_freq
         << ',' << it.loss_after_quant << ',' << it.loss_after_beam << ','
         << it.loss_after_fa << ',' << it.rel_change << '\n';
    }
  }
  out << os.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto parse_one = [&](const std::string& s) -> std::uint64_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (s.empty() || pos != s.size()) fail(ErrorCode::Configuration, "bad seed '" + s + "'");
    return v;
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = parse_one(text.substr(0, dots));
    const auto hi = parse_one(text.substr(dots + 2));
    require(lo <= hi, ErrorCode::Configuration, "seed range must be ascending");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  require(text.empty() || text.back() != ',', ErrorCode::Configuration, "trailing comma in seed list");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) seeds.push_back(parse_one(item));
  require(!seeds.empty(), ErrorCode::Configuration, "empty seed list");
  return seeds;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  require(text.empty() || text.back() != ',', ErrorCode::Configuration,
          "trailing comma in value list");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      fail(ErrorCode::Configuration, "bad sweep value '" + item + "'");
    }
    values.push_back(v);
  }
  require(!values.empty(), ErrorCode::Configuration, "empty sweep value list");
  return values;
}

}  // namespace fluidnet
