#include "mechprior/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "mechprior/kernels.hpp"
#include "mechprior/rng.hpp"

namespace mechprior {

namespace {

enum SeedTag : std::uint64_t { kTrainTag = 1, kEvalTag = 2, kInitTag = 3, kFitTag = 4, kActTag = 5, kCellTag = 6 };

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Action uniform_action(const ActionBounds& b, Rng& rng) {
  Action a(b.dims());
  for (std::size_t d = 0; d < b.dims(); ++d) a[d] = uniform(rng, b.low[d], b.high[d]);
  return a;
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::CppGpUcb: return "CppGpUcb";
    case Strategy::CppRandom: return "CppRandom";
    case Strategy::GpUcbBaseline: return "GpUcbBaseline";
    case Strategy::RandomBaseline: return "RandomBaseline";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  for (auto s : {Strategy::CppGpUcb, Strategy::CppRandom, Strategy::GpUcbBaseline, Strategy::RandomBaseline}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown strategy: " + std::string(text));
}

ActionScore ZeroPrior::bind(const Mechanism&, const ContextImage&) const {
  return [](std::span<const double>) { return 0.0; };
}

ActionScore NetworkPrior::bind(const Mechanism&, const ContextImage& image) const {
  auto features = encode_image(weights_, image);
  return [this, features](std::span<const double> a) { return predict_from_features(weights_, features, a); };
}

ActionScore OraclePrior::bind(const Mechanism& m, const ContextImage&) const {
  return [m](std::span<const double> a) { return execute_action(m, a); };
}

KernelParams default_kernel(MechanismKind kind) {
  KernelParams k;
  k.lengthscales = kind == MechanismKind::Slider ? std::vector<double>{0.55, 0.12} : std::vector<double>{0.05, 0.55, 0.25};
  k.signal_variance = 0.04;
  k.noise_variance = 1e-6;
  return k;
}

void ExperimentConfig::validate() const {
  if (L < 0 || M < 1 || N < 0) throw std::invalid_argument("config: need L >= 0, M >= 1, N >= 0");
  if (max_attempts < 1) throw std::invalid_argument("config: max_attempts must be positive");
  if (!(regret_threshold > 0.0 && regret_threshold < 1.0)) {
    throw std::invalid_argument("config: regret_threshold must lie in (0, 1)");
  }
  if (model_seeds.empty()) throw std::invalid_argument("config: at least one model seed required");
  for (int c : checkpoints) {
    if (c < 0 || c > L) throw std::invalid_argument("config: checkpoint outside [0, L]");
  }
  if (strategies.empty()) throw std::invalid_argument("config: no strategies");
  if (kernel.lengthscales.size() != action_bounds(kind).dims()) {
    throw std::invalid_argument("config: kernel lengthscales must match the action dimension");
  }
  kernel.validate();
  acquisition.validate();
  training.validate();
  if (!(beta >= 0.0)) throw std::invalid_argument("config: beta must be nonnegative");
  if (fit_interval < 0) throw std::invalid_argument("config: fit_interval must be nonnegative");
}

ExperimentConfig default_config(MechanismKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.kernel = default_kernel(kind);
  cfg.acquisition = default_acquisition(kind);
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  std::vector<std::string> strategies;
  for (auto s : cfg.strategies) strategies.emplace_back(to_string(s));
  return {
      {"kind", to_string(cfg.kind)},
      {"L", cfg.L},
      {"M", cfg.M},
      {"N", cfg.N},
      {"max_attempts", cfg.max_attempts},
      {"regret_threshold", cfg.regret_threshold},
      {"seed", cfg.seed},
      {"model_seeds", cfg.model_seeds},
      {"checkpoints", cfg.checkpoints},
      {"strategies", strategies},
      {"kernel",
       {{"lengthscales", cfg.kernel.lengthscales},
        {"signal_variance", cfg.kernel.signal_variance},
        {"noise_variance", cfg.kernel.noise_variance}}},
      {"acquisition",
       {{"grid_points", cfg.acquisition.grid_points},
        {"top_k", cfg.acquisition.top_k},
        {"max_iterations", cfg.acquisition.max_iterations},
        {"tolerance", cfg.acquisition.tolerance}}},
      {"training",
       {{"epochs", cfg.training.epochs},
        {"batch_size", cfg.training.batch_size},
        {"step_size", cfg.training.step_size},
        {"beta1", cfg.training.beta1},
        {"beta2", cfg.training.beta2},
        {"max_steps", cfg.training.max_steps}}},
      {"beta", cfg.beta},
      {"fit_interval", cfg.fit_interval},
      {"charge_probes", cfg.charge_probes},
      {"collection_uses_prior", cfg.collection_uses_prior},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg = default_config(parse_kind(j.at("kind").get<std::string>()));
  read_opt(j, "L", cfg.L);
  read_opt(j, "M", cfg.M);
  read_opt(j, "N", cfg.N);
  read_opt(j, "max_attempts", cfg.max_attempts);
  read_opt(j, "regret_threshold", cfg.regret_threshold);
  read_opt(j, "seed", cfg.seed);
  read_opt(j, "model_seeds", cfg.model_seeds);
  read_opt(j, "checkpoints", cfg.checkpoints);
  if (j.contains("strategies")) {
    cfg.strategies.clear();
    for (const auto& s : j.at("strategies")) cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
  }
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    read_opt(k, "lengthscales", cfg.kernel.lengthscales);
    read_opt(k, "signal_variance", cfg.kernel.signal_variance);
    read_opt(k, "noise_variance", cfg.kernel.noise_variance);
  }
  if (j.contains("acquisition")) {
    const auto& a = j.at("acquisition");
    read_opt(a, "grid_points", cfg.acquisition.grid_points);
    read_opt(a, "top_k", cfg.acquisition.top_k);
    read_opt(a, "max_iterations", cfg.acquisition.max_iterations);
    read_opt(a, "tolerance", cfg.acquisition.tolerance);
  }
  if (j.contains("training")) {
    const auto& t = j.at("training");
    read_opt(t, "epochs", cfg.training.epochs);
    read_opt(t, "batch_size", cfg.training.batch_size);
    read_opt(t, "step_size", cfg.training.step_size);
    read_opt(t, "beta1", cfg.training.beta1);
    read_opt(t, "beta2", cfg.training.beta2);
    read_opt(t, "max_steps", cfg.training.max_steps);
  }
  read_opt(j, "beta", cfg.beta);
  read_opt(j, "fit_interval", cfg.fit_interval);
  read_opt(j, "charge_probes", cfg.charge_probes);
  read_opt(j, "collection_uses_prior", cfg.collection_uses_prior);
  std::sort(cfg.checkpoints.begin(), cfg.checkpoints.end());
  cfg.checkpoints.erase(std::unique(cfg.checkpoints.begin(), cfg.checkpoints.end()), cfg.checkpoints.end());
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
}

std::uint64_t training_mechanism_seed(const ExperimentConfig& cfg, std::uint64_t model_seed, int index) {
  return derive_seed({cfg.seed, kTrainTag, model_seed, static_cast<std::uint64_t>(index)}) << 1;
}

std::uint64_t evaluation_mechanism_seed(const ExperimentConfig& cfg, int index) {
  return (derive_seed({cfg.seed, kEvalTag, static_cast<std::uint64_t>(index)}) << 1) | 1ULL;
}

std::vector<Mechanism> evaluation_mechanisms(const ExperimentConfig& cfg) {
  std::vector<Mechanism> out;
  out.reserve(static_cast<std::size_t>(cfg.N));
  for (int n = 0; n < cfg.N; ++n) out.push_back(generate_mechanism(cfg.kind, evaluation_mechanism_seed(cfg, n)));
  return out;
}

EvalRecord evaluate_one(Strategy strategy, const PriorModel* prior, const Mechanism& m, const ExperimentConfig& cfg,
                        std::uint64_t rng_seed) {
  if (is_cpp(strategy) && prior == nullptr) throw std::invalid_argument("Cpp strategies need a prior");
  const ActionBounds bounds = action_bounds(m.kind);
  const double optimum = oracle_optimal(m).reward;
  const ContextImage image = render(m);
  const ZeroPrior zero;
  const ActionScore prior_fn = (is_cpp(strategy) ? prior : &zero)->bind(m, image);
  const bool random = strategy == Strategy::RandomBaseline;

  Rng rng(rng_seed);
  GpState gp(cfg.kernel);
  double best_seen = 0.0;
  int used = 0;
  EvalRecord rec;
  rec.mech_seed = m.seed;

  auto observe = [&](const Action& a, double r) {
    best_seen = std::max(best_seen, r);
    if (!random) gp = gp.add_observation(a, r - prior_fn(a));
  };
  // Current best-estimate regret. A probe only becomes an interaction when charged.
  auto measure = [&]() {
    if (random) return normalized_regret(optimum, best_seen);
    const Action a = best_estimate(prior_fn, gp, bounds, cfg.acquisition);
    const double r = execute_action(m, a);
    if (cfg.charge_probes) {
      ++used;
      observe(a, r);
    }
    return normalized_regret(optimum, r);
  };

  double regret = measure();
  rec.initial_regret = regret;
  if (regret < cfg.regret_threshold && used <= cfg.max_attempts) rec.attempts_to_success = used;

  while (!rec.attempts_to_success && used < cfg.max_attempts) {
    const Action a = random ? uniform_action(bounds, rng) : select_ucb_action(prior_fn, gp, bounds, cfg.beta, cfg.acquisition);
    const double r = execute_action(m, a);
    ++used;
    observe(a, r);
    regret = measure();
    rec.attempts.push_back({a, r, regret});
    if (regret < cfg.regret_threshold && used <= cfg.max_attempts) rec.attempts_to_success = used;
  }
  rec.final_regret = regret;
  rec.gp_observations = random ? 0 : gp.size();
  return rec;
}

Collection collect_training(const ExperimentConfig& cfg, Strategy strategy, std::uint64_t model_seed) {
  if (!is_cpp(strategy)) throw std::invalid_argument("training collection needs a Cpp strategy");
  const auto strategy_id = static_cast<std::uint64_t>(strategy);
  const ActionBounds bounds = action_bounds(cfg.kind);
  Collection out;
  NetworkWeights weights = init_weights(derive_seed({cfg.seed, kInitTag, model_seed}));
  bool trained = false;
  if (contains(cfg.checkpoints, 0)) out.snapshots.emplace(0, weights);

  for (int l = 1; l <= cfg.L; ++l) {
    const Mechanism m = generate_mechanism(cfg.kind, training_mechanism_seed(cfg, model_seed, l));
    Rng rng(derive_seed({cfg.seed, kActTag, model_seed, strategy_id, static_cast<std::uint64_t>(l)}));
    if (strategy == Strategy::CppRandom) {
      for (int t = 0; t < cfg.M; ++t) {
        Action a = uniform_action(bounds, rng);
        const double r = execute_action(m, a);
        out.data.add(m, std::move(a), r);
      }
    } else {
      const ContextImage image = render(m);
      const NetworkPrior net(weights);
      const ZeroPrior zero;
      const PriorModel& prior = (cfg.collection_uses_prior && trained) ? static_cast<const PriorModel&>(net) : zero;
      const ActionScore prior_fn = prior.bind(m, image);
      GpState gp(cfg.kernel);
      for (int t = 0; t < cfg.M; ++t) {
        Action a = select_ucb_action(prior_fn, gp, bounds, cfg.beta, cfg.acquisition);
        const double r = execute_action(m, a);
        gp = gp.add_observation(a, r - prior_fn(a));
        out.data.add(m, std::move(a), r);
      }
    }

    const bool checkpoint = contains(cfg.checkpoints, l);
    if (checkpoint || (cfg.fit_interval > 0 && l % cfg.fit_interval == 0)) {
      weights = fit(weights, out.data, cfg.training,
                    derive_seed({cfg.seed, kFitTag, model_seed, strategy_id, static_cast<std::uint64_t>(l)}))
                    .weights;
      trained = true;
      ++out.fits;
    }
    if (checkpoint) out.snapshots.emplace(l, weights);
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<CurvePoint> aggregate(const std::vector<CellResult>& cells, int max_attempts) {
  std::vector<std::pair<Strategy, int>> keys;
  std::map<std::pair<Strategy, int>, std::vector<double>> groups;
  for (const auto& c : cells) {
    const auto key = std::make_pair(c.strategy, c.L);
    if (!groups.contains(key)) keys.push_back(key);
    groups[key].push_back(c.attempts < 0 ? max_attempts : c.attempts);
  }
  std::vector<CurvePoint> out;
  for (const auto& key : keys) {
    const auto& v = groups[key];
    out.push_back({key.first, key.second, quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75)});
  }
  return out;
}

ExperimentResults run_experiment(const ExperimentConfig& cfg, RunArtifacts* artifacts, const ProgressFn& progress) {
  cfg.validate();
  const auto mechs = evaluation_mechanisms(cfg);
  ExperimentResults results;
  results.max_attempts = cfg.max_attempts;
  auto note = [&](const std::string& msg) {
    if (progress) progress(msg);
  };

  auto evaluate_all = [&](Strategy s, const PriorModel* prior, std::uint64_t model_seed, int L) {
    std::vector<EvalRecord> recs(mechs.size());
    kernels::parallel_for(mechs.size(), [&](std::size_t n) {
      const auto seed = derive_seed({cfg.seed, kCellTag, static_cast<std::uint64_t>(s), model_seed,
                                     static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(n)});
      recs[n] = evaluate_one(s, prior, mechs[n], cfg, seed);
    });
    return recs;
  };
  auto push_cells = [&](Strategy s, std::uint64_t model_seed, int L, const std::vector<EvalRecord>& recs) {
    for (const auto& r : recs) {
      results.cells.push_back({s, L, model_seed, r.mech_seed, r.attempts_to_success.value_or(-1), r.final_regret});
    }
  };

  for (Strategy s : cfg.strategies) {
    for (std::uint64_t model_seed : cfg.model_seeds) {
      if (!is_cpp(s)) {
        // Baselines do not learn across mechanisms: evaluate once, replicate across checkpoints.
        note(fmt::format("{} seed {}: evaluating {} mechanisms", to_string(s), model_seed, mechs.size()));
        const auto recs = evaluate_all(s, nullptr, model_seed, -1);
        for (int L : cfg.checkpoints) push_cells(s, model_seed, L, recs);
        continue;
      }
      note(fmt::format("{} seed {}: collecting L={} M={}", to_string(s), model_seed, cfg.L, cfg.M));
      Collection col;
      try {
        col = collect_training(cfg, s, model_seed);
      } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format("{} model seed {}: {}", to_string(s), model_seed, e.what()));
      }
      for (int L : cfg.checkpoints) {
        note(fmt::format("{} seed {}: evaluating checkpoint L={}", to_string(s), model_seed, L));
        const NetworkPrior prior(col.snapshots.at(L));
        push_cells(s, model_seed, L, evaluate_all(s, &prior, model_seed, L));
      }
      if (artifacts != nullptr) artifacts->collections.emplace(std::make_pair(s, model_seed), std::move(col));
    }
  }

  // Cells are produced strategy-major; reorder to strategy, L, seed, mechanism.
  auto position = [&](Strategy s) { return std::find(cfg.strategies.begin(), cfg.strategies.end(), s) - cfg.strategies.begin(); };
  std::stable_sort(results.cells.begin(), results.cells.end(), [&](const CellResult& a, const CellResult& b) {
    return std::make_pair(position(a.strategy), a.L) < std::make_pair(position(b.strategy), b.L);
  });
  results.curves = aggregate(results.cells, cfg.max_attempts);
  return results;
}

ExperimentResults evaluate_weights(const ExperimentConfig& cfg, const NetworkWeights& weights, int L) {
  cfg.validate();
  const auto mechs = evaluation_mechanisms(cfg);
  const NetworkPrior prior(weights);
  const std::uint64_t model_seed = cfg.model_seeds.front();
  ExperimentResults results;
  results.max_attempts = cfg.max_attempts;
  for (Strategy s : cfg.strategies) {
    std::vector<EvalRecord> recs(mechs.size());
    kernels::parallel_for(mechs.size(), [&](std::size_t n) {
      const auto seed = derive_seed({cfg.seed, kCellTag, static_cast<std::uint64_t>(s), model_seed,
                                     static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(n)});
      recs[n] = evaluate_one(s, &prior, mechs[n], cfg, seed);
    });
    for (const auto& r : recs) {
      results.cells.push_back({s, L, model_seed, r.mech_seed, r.attempts_to_success.value_or(-1), r.final_regret});
    }
  }
  results.curves = aggregate(results.cells, cfg.max_attempts);
  return results;
}

std::vector<NnOnlyResult> nn_only_eval(const PriorModel& prior, const std::vector<Mechanism>& mechanisms,
                                       const ExperimentConfig& cfg, int cap) {
  ExperimentConfig capped = cfg;
  capped.max_attempts = cap;
  std::vector<NnOnlyResult> out(mechanisms.size());
  kernels::parallel_for(mechanisms.size(), [&](std::size_t i) {
    const Mechanism& m = mechanisms[i];
    const ContextImage image = render(m);
    const ActionScore f = prior.bind(m, image);
    const auto best = maximize(f, action_bounds(m.kind), cfg.acquisition);
    out[i].mech_seed = m.seed;
    out[i].nn_regret = normalized_regret(oracle_optimal(m).reward, execute_action(m, best.action));
    out[i].cpp_regret =
        evaluate_one(Strategy::CppGpUcb, &prior, m, capped, derive_seed({cfg.seed, kCellTag, m.seed})).final_regret;
  });
  return out;
}

std::size_t Histogram::total() const {
  std::size_t n = zero_count;
  for (auto c : counts) n += c;
  return n;
}

Histogram motion_histogram(const Dataset& data, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  double top = 0.0;
  for (const auto& r : data.records()) top = std::max(top, r.reward);
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = top * b / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& r : data.records()) {
    if (r.reward == 0.0) {
      ++h.zero_count;
      continue;
    }
    auto b = static_cast<std::size_t>(r.reward / top * bins);
    ++h.counts[std::min(b, h.counts.size() - 1)];
  }
  return h;
}

double zero_reward_fraction(const Dataset& data) {
  if (data.empty()) return 0.0;
  return static_cast<double>(motion_histogram(data, 1).zero_count) / static_cast<double>(data.size());
}

void write_cells_csv(const ExperimentResults& results, std::ostream& out) {
  out << "strategy,L,seed,mech_seed,attempts,final_regret\n";
  for (const auto& c : results.cells) {
    out << fmt::format("{},{},{},{},{},{}\n", to_string(c.strategy), c.L, c.model_seed, c.mech_seed, c.attempts,
                       c.final_regret);
  }
}

void write_curves_csv(const std::vector<CurvePoint>& curves, std::ostream& out) {
  out << "strategy,L,q25,median,q75\n";
  for (const auto& p : curves) {
    out << fmt::format("{},{},{},{},{}\n", to_string(p.strategy), p.L, p.q25, p.median, p.q75);
  }
}

std::vector<CurvePoint> read_curves_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "strategy,L,q25,median,q75") {
    throw ResultsFormatError("curve CSV: unexpected header");
  }
  std::vector<CurvePoint> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 5) throw ResultsFormatError(fmt::format("curve CSV line {}: expected 5 fields", line_no));
    try {
      out.push_back({parse_strategy(fields[0]), std::stoi(fields[1]), std::stod(fields[2]), std::stod(fields[3]),
                     std::stod(fields[4])});
    } catch (const std::exception& e) {
      throw ResultsFormatError(fmt::format("curve CSV line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

void save_results(const ExperimentResults& results, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : results.cells) {
    cells.push_back({{"strategy", to_string(c.strategy)},
                     {"L", c.L},
                     {"seed", c.model_seed},
                     {"mech_seed", c.mech_seed},
                     {"attempts", c.attempts},
                     {"final_regret", c.final_regret}});
  }
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& p : results.curves) {
    curves.push_back({{"strategy", to_string(p.strategy)}, {"L", p.L}, {"q25", p.q25}, {"median", p.median}, {"q75", p.q75}});
  }
  const nlohmann::json doc = {{"version", ExperimentResults::kVersion},
                              {"max_attempts", results.max_attempts},
                              {"cells", cells},
                              {"curves", curves}};
  std::ofstream(dir / "results.json") << doc.dump(1) << '\n';
  std::ofstream cells_csv(dir / "cells.csv");
  write_cells_csv(results, cells_csv);
  std::ofstream curves_csv(dir / "curves.csv");
  write_curves_csv(results.curves, curves_csv);
}

ExperimentResults load_results(const std::filesystem::path& results_json) {
  std::ifstream in(results_json);
  if (!in) throw ResultsFormatError("cannot open " + results_json.string());
  try {
    const auto doc = nlohmann::json::parse(in);
    const auto version = doc.at("version").get<std::string>();
    if (version != ExperimentResults::kVersion) throw ResultsFormatError("unsupported results version: " + version);
    ExperimentResults r;
    r.max_attempts = doc.at("max_attempts").get<int>();
    for (const auto& c : doc.at("cells")) {
      r.cells.push_back({parse_strategy(c.at("strategy").get<std::string>()), c.at("L").get<int>(),
                         c.at("seed").get<std::uint64_t>(), c.at("mech_seed").get<std::uint64_t>(),
                         c.at("attempts").get<int>(), c.at("final_regret").get<double>()});
    }
    for (const auto& p : doc.at("curves")) {
      r.curves.push_back({parse_strategy(p.at("strategy").get<std::string>()), p.at("L").get<int>(),
                          p.at("q25").get<double>(), p.at("median").get<double>(), p.at("q75").get<double>()});
    }
    return r;
  } catch (const ResultsFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw ResultsFormatError(std::string("malformed results file (") + std::string(ExperimentResults::kVersion) +
                             "): " + e.what());
  }
}

}  // namespace mechprior
