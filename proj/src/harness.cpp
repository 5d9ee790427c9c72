#include "minmax/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace minmax::harness {

namespace {

constexpr std::uint64_t kAlgoStreamSalt = 0x616c676full;  // algorithm-owned randomness

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Defaults {
  std::size_t k;
  std::size_t d;
};

Defaults defaults_for(Experiment e) {
  switch (e) {
    case Experiment::linear:
      return {10, 10};
    case Experiment::quadratic:
      return {10, 1};
    case Experiment::experts:
      return {2, 0};  // d follows K
    case Experiment::fairclf:
      return {10, 20};
    case Experiment::switching:
      return {3, 20};
    case Experiment::adversarial:
      return {2, 1};
  }
  return {2, 1};
}

std::size_t effective_k(const ExperimentConfig& c) {
  return c.num_sequences != 0 ? c.num_sequences : defaults_for(c.experiment).k;
}

std::size_t effective_d(const ExperimentConfig& c) {
  if (c.experiment == Experiment::experts) return effective_k(c);
  return c.dim != 0 ? c.dim : defaults_for(c.experiment).d;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::linear:
      return "linear";
    case Experiment::quadratic:
      return "quadratic";
    case Experiment::experts:
      return "experts";
    case Experiment::fairclf:
      return "fairclf";
    case Experiment::switching:
      return "switching";
    case Experiment::adversarial:
      return "adversarial";
  }
  return "?";
}

std::string to_string(AlgoKind a) {
  switch (a) {
    case AlgoKind::hedge_ogd:
      return "hedge-ogd";
    case AlgoKind::avg_ogd:
      return "avg-ogd";
    case AlgoKind::greedy:
      return "greedy";
    case AlgoKind::ftrl:
      return "ftrl";
    case AlgoKind::multi:
      return "multi";
  }
  return "?";
}

std::string to_string(FeedbackMode f) {
  switch (f) {
    case FeedbackMode::full:
      return "full";
    case FeedbackMode::bandit_one_point:
      return "bandit1";
    case FeedbackMode::bandit_two_point:
      return "bandit2";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  if (s == "linear") return Experiment::linear;
  if (s == "quadratic") return Experiment::quadratic;
  if (s == "experts") return Experiment::experts;
  if (s == "fairclf") return Experiment::fairclf;
  if (s == "switching") return Experiment::switching;
  if (s == "adversarial") return Experiment::adversarial;
  throw ConfigError("unknown experiment: " + s);
}

AlgoKind algo_from_string(const std::string& s) {
  if (s == "hedge-ogd") return AlgoKind::hedge_ogd;
  if (s == "avg-ogd") return AlgoKind::avg_ogd;
  if (s == "greedy") return AlgoKind::greedy;
  if (s == "ftrl") return AlgoKind::ftrl;
  if (s == "multi") return AlgoKind::multi;
  throw ConfigError("unknown algorithm: " + s);
}

FeedbackMode feedback_from_string(const std::string& s) {
  if (s == "full") return FeedbackMode::full;
  if (s == "bandit1") return FeedbackMode::bandit_one_point;
  if (s == "bandit2") return FeedbackMode::bandit_two_point;
  throw ConfigError("unknown feedback mode: " + s);
}

void validate(const ExperimentConfig& c) {
  if (c.horizons.empty()) throw ConfigError("need at least one horizon (--T)");
  for (std::size_t t : c.horizons) {
    if (t == 0) throw ConfigError("horizons must be positive");
  }
  if (c.seeds == 0) throw ConfigError("need at least one seed");

  const std::size_t k = effective_k(c);
  const std::size_t d = effective_d(c);

  if (c.feedback != FeedbackMode::full && c.algo != AlgoKind::hedge_ogd) {
    throw ConfigError("bandit feedback is only available for hedge-ogd");
  }
  if (c.algo == AlgoKind::multi && c.experiment != Experiment::experts) {
    throw ConfigError("multi runs on the experts experiment only");
  }
  if (c.algo == AlgoKind::greedy &&
      !(c.experiment == Experiment::adversarial || c.experiment == Experiment::quadratic)) {
    throw ConfigError("greedy is limited to the one-dimensional experiments");
  }

  switch (c.experiment) {
    case Experiment::adversarial:
      if (k != 2) throw ConfigError("the adversarial experiment has exactly two sequences");
      if (d != 1) throw ConfigError("the adversarial experiment is one-dimensional");
      break;
    case Experiment::quadratic:
      if (d != 1) throw ConfigError("the quadratic experiment is one-dimensional");
      break;
    case Experiment::experts:
      if (k < 2) throw ConfigError("the experts experiment needs K >= 2");
      if (c.dim != 0 && c.dim != k) throw ConfigError("experts actions live on the K-simplex");
      if (!(0.0 <= c.experts_lo && c.experts_lo < c.experts_hi && c.experts_hi <= 1.0)) {
        throw ConfigError("experts losses need 0 <= lo < hi <= 1");
      }
      break;
    case Experiment::switching:
      if (k < 2) throw ConfigError("the switching experiment needs K >= 2");
      break;
    default:
      break;
  }

  if (c.loss_bound_override && !(*c.loss_bound_override > 0.0)) throw ConfigError("loss bound must be positive");
  if (c.grad_bound_override && !(*c.grad_bound_override > 0.0)) throw ConfigError("gradient bound must be positive");

  if (c.set_override) {
    const FeasibleSet& set = *c.set_override;
    switch (c.experiment) {
      case Experiment::experts:
        if (set.kind() != FeasibleSet::Kind::simplex || set.dim() != k) {
          throw ConfigError("experts needs the K-simplex as its decision set");
        }
        break;
      case Experiment::adversarial:
      case Experiment::quadratic:
        if (set.dim() != 1) throw ConfigError("this experiment needs a one-dimensional set");
        break;
      default:
        if (set.dim() != d) throw ConfigError("decision set dimension must match d");
        break;
    }
  }
}

Instance make_instance(const ExperimentConfig& c, std::uint64_t run_seed) {
  const std::size_t k = effective_k(c);
  const std::size_t d = effective_d(c);
  RandomSource rng(run_seed);

  auto preset_set = [&]() -> FeasibleSet {
    if (c.set_override) return *c.set_override;
    switch (c.experiment) {
      case Experiment::linear:
        return FeasibleSet::ball(Vec(d, 0.0), 1.0);
      case Experiment::quadratic:
        return FeasibleSet::interval(-1.0, 1.0);
      case Experiment::experts:
        return FeasibleSet::simplex(k);
      case Experiment::fairclf:
      case Experiment::switching:
        return FeasibleSet::ball(Vec(d, 0.0), 2.5);
      case Experiment::adversarial:
        return FeasibleSet::interval(0.0, 1.0);
    }
    throw ConfigError("unknown experiment");
  };

  auto build = [&]() -> std::pair<FeasibleSet, std::shared_ptr<LossOracle>> {
    FeasibleSet set = preset_set();
    switch (c.experiment) {
      case Experiment::linear:
        return {set, std::shared_ptr<LossOracle>(make_random_linear(set, k, rng))};
      case Experiment::quadratic:
        return {set, std::shared_ptr<LossOracle>(make_random_quadratic(set, k, rng))};
      case Experiment::experts:
        return {set, std::shared_ptr<LossOracle>(
                         make_expert_losses(set, k, c.experts_lo, c.experts_hi, rng))};
      case Experiment::fairclf: {
        FairClassificationParams p;
        p.groups = k;
        p.batch = c.fair_batch != 0 ? c.fair_batch : 50;
        p.regularizer = c.fair_regularizer != 0.0 ? c.fair_regularizer : 1e-3;
        p.feature_noise = c.fair_noise;
        return {set, std::shared_ptr<LossOracle>(make_fair_classification(set, p, rng))};
      }
      case Experiment::switching: {
        SwitchingParams p;
        p.base.groups = k;
        p.base.batch = c.fair_batch != 0 ? c.fair_batch : 50;
        p.base.regularizer = c.fair_regularizer != 0.0 ? c.fair_regularizer : 1e-3;
        p.base.feature_noise = c.fair_noise;
        p.switch_interval = c.switch_interval != 0 ? c.switch_interval : 100;
        p.shift_magnitude = c.shift_magnitude >= 0.0 ? c.shift_magnitude : 5.0;
        return {set, std::shared_ptr<LossOracle>(make_switching_fair(set, p, rng))};
      }
      case Experiment::adversarial:
        return {set, std::shared_ptr<LossOracle>(make_adversarial_pair())};
    }
    throw ConfigError("unknown experiment");
  };

  auto [set, oracle] = build();
  ProblemBounds bounds = oracle->bounds();
  if (c.loss_bound_override) bounds.loss_bound = *c.loss_bound_override;
  if (c.grad_bound_override) bounds.grad_bound = *c.grad_bound_override;
  bounds.validate();

  StepSchedule eta_theta = StepSchedule::hedge_sqrt(k, bounds.loss_bound);
  StepSchedule eta_x = [&] {
    switch (c.feedback) {
      case FeedbackMode::bandit_one_point:
        return StepSchedule::bandit_one_point(bounds.diameter, bounds.grad_bound, set.dim());
      case FeedbackMode::bandit_two_point:
        return StepSchedule::bandit_two_point(bounds.diameter, bounds.grad_bound, set.dim());
      case FeedbackMode::full:
      default:
        if (c.experiment == Experiment::quadratic) {
          // 1/t steps sized to the curvature of the squared-distance losses
          // (every mixture of them has second derivative 2); smaller
          // constants provably lose the logarithmic rate.
          return StepSchedule::inverse_t(0.5);
        }
        return StepSchedule::ogd_sqrt(bounds.diameter, bounds.grad_bound);
    }
  }();

  return Instance{std::move(set), std::move(oracle), bounds, eta_x, eta_theta};
}

namespace {

RunRecord run_single(const ExperimentConfig& c, std::uint64_t seed_index, std::size_t horizon,
                     RunTrace* trace_out) {
  const std::uint64_t run_seed = c.base_seed ^ seed_index;
  const auto started = std::chrono::steady_clock::now();

  Instance inst = make_instance(c, run_seed);

  RunSpec spec;
  spec.algo = c.algo;
  spec.feedback = c.feedback;
  spec.horizon = horizon;
  spec.bounds = inst.bounds;
  spec.eta_x = inst.eta_x;
  spec.eta_theta = inst.eta_theta;
  spec.ftrl_regularizer = c.ftrl_regularizer;
  spec.algo_seed = RandomSource::combine(run_seed, kAlgoStreamSalt);

  RunTrace trace = run_online(spec, *inst.oracle, inst.set);

  RunRecord rec;
  rec.experiment = to_string(c.experiment);
  rec.algo = to_string(c.algo);
  rec.feedback = to_string(c.feedback);
  rec.seed = seed_index;
  rec.horizon = horizon;
  rec.num_sequences = inst.oracle->num_sequences();
  rec.dim = inst.set.dim();

  const RoundsView rounds{inst.oracle.get(), horizon};
  if (c.decompose) {
    const RegretReport report =
        decompose_regret(trace.actions, trace.thetas, rounds, inst.set);
    rec.cost_algorithm = report.cost_algorithm;
    rec.cost_offline = report.cost_offline;
    rec.regret = report.regret;
    rec.r1 = report.r1;
    rec.r2 = report.r2;
    rec.r3 = report.r3;
    rec.per_slot_benchmark = report.per_slot_benchmark;
  } else {
    rec.cost_algorithm = max_over_simplex(trace.cum_losses).second;
    rec.cost_offline = solve_offline_minmax(rounds, inst.set).value;
    rec.regret = rec.cost_algorithm - rec.cost_offline;
    const double nan = std::nan("");
    rec.r1 = rec.r2 = rec.r3 = rec.per_slot_benchmark = nan;
  }

  rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started)
                    .count();
  if (trace_out) *trace_out = std::move(trace);
  return rec;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& c) {
  validate(c);

  struct Task {
    std::uint64_t seed;
    std::size_t horizon;
  };
  std::vector<Task> tasks;
  for (std::uint64_t s = 0; s < c.seeds; ++s) {
    for (std::size_t t : c.horizons) tasks.push_back({s, t});
  }

  std::vector<RunRecord> records(tasks.size());
  std::vector<RunTrace> traces(c.trace_path.empty() ? 0 : tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(tasks.size(), c.threads != 0 ? c.threads : hw);

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        RunTrace* trace_out = traces.empty() ? nullptr : &traces[i];
        records[i] = run_single(c, tasks[i].seed, tasks[i].horizon, trace_out);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (!c.trace_path.empty()) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      std::string path = c.trace_path;
      if (tasks.size() > 1) {
        std::ostringstream suffix;
        suffix << ".s" << tasks[i].seed << ".T" << tasks[i].horizon;
        path += suffix.str();
      }
      emit_trace(traces[i], path);
    }
  }
  return records;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << "experiment,algo,feedback,seed,T,K,d,C_alg,C_opt,regret,R1,R2,R3,per_slot_benchmark,"
         "wall_ms\n";
  for (const RunRecord& r : records) {
    out << r.experiment << ',' << r.algo << ',' << r.feedback << ',' << r.seed << ',' << r.horizon
        << ',' << r.num_sequences << ',' << r.dim << ',' << format_double(r.cost_algorithm) << ','
        << format_double(r.cost_offline) << ',' << format_double(r.regret) << ','
        << format_double(r.r1) << ',' << format_double(r.r2) << ',' << format_double(r.r3) << ','
        << format_double(r.per_slot_benchmark) << ',' << r.wall_ms << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_trace(const RunTrace& trace, const std::string& path) {
  if (trace.values.empty()) throw std::invalid_argument("emit_trace: empty trace");
  const std::size_t k = trace.values.front().size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_trace: cannot open " + path);
  out << "t,max_cum_loss";
  for (std::size_t i = 0; i < k; ++i) out << ",theta_" << i;
  out << ",step_eta_x,step_eta_theta\n";
  Vec cumulative(k, 0.0);
  for (std::size_t t = 1; t <= trace.values.size(); ++t) {
    for (std::size_t i = 0; i < k; ++i) cumulative[i] += trace.values[t - 1][i];
    out << t << ',' << format_double(max_over_simplex(cumulative).second);
    for (std::size_t i = 0; i < k; ++i) out << ',' << format_double(trace.thetas[t - 1][i]);
    out << ',' << format_double(trace.eta_x_used[t - 1]) << ','
        << format_double(trace.eta_theta_used[t - 1]) << '\n';
  }
  if (!out) throw std::runtime_error("emit_trace: write failed for " + path);
}

namespace {

FeasibleSet set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("set descriptor needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "interval") {
      return FeasibleSet::interval(j.at("lo").get<double>(), j.at("hi").get<double>());
    }
    if (kind == "box") {
      return FeasibleSet::box(j.at("lower").get<Vec>(), j.at("upper").get<Vec>());
    }
    if (kind == "ball") {
      return FeasibleSet::ball(j.at("center").get<Vec>(), j.at("radius").get<double>());
    }
    if (kind == "simplex") {
      return FeasibleSet::simplex(j.at("k").get<std::size_t>());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad set descriptor: ") + e.what());
  }
  throw ConfigError("unknown set kind: " + kind);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      c.experiment = experiment_from_string(value.get<std::string>());
    } else if (key == "algo") {
      c.algo = algo_from_string(value.get<std::string>());
    } else if (key == "feedback") {
      c.feedback = feedback_from_string(value.get<std::string>());
    } else if (key == "horizons") {
      c.horizons = value.get<std::vector<std::size_t>>();
    } else if (key == "k") {
      c.num_sequences = value.get<std::size_t>();
    } else if (key == "d") {
      c.dim = value.get<std::size_t>();
    } else if (key == "seeds") {
      c.seeds = value.get<std::size_t>();
    } else if (key == "base_seed") {
      c.base_seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      c.out_path = value.get<std::string>();
    } else if (key == "trace") {
      c.trace_path = value.get<std::string>();
    } else if (key == "decompose") {
      c.decompose = value.get<bool>();
    } else if (key == "threads") {
      c.threads = value.get<std::size_t>();
    } else if (key == "loss_bound") {
      c.loss_bound_override = value.get<double>();
    } else if (key == "grad_bound") {
      c.grad_bound_override = value.get<double>();
    } else if (key == "set") {
      c.set_override = set_from_json(value);
    } else if (key == "experts_lo") {
      c.experts_lo = value.get<double>();
    } else if (key == "experts_hi") {
      c.experts_hi = value.get<double>();
    } else if (key == "fair_batch") {
      c.fair_batch = value.get<std::size_t>();
    } else if (key == "fair_regularizer") {
      c.fair_regularizer = value.get<double>();
    } else if (key == "fair_noise") {
      c.fair_noise = value.get<double>();
    } else if (key == "switch_interval") {
      c.switch_interval = value.get<std::size_t>();
    } else if (key == "shift_magnitude") {
      c.shift_magnitude = value.get<double>();
    } else if (key == "ftrl_regularizer") {
      c.ftrl_regularizer = value.get<double>();
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  return c;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

}  // namespace minmax::harness
