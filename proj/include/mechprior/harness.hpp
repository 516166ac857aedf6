#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mechprior/acquisition.hpp"
#include "mechprior/gp.hpp"
#include "mechprior/mechanism.hpp"
#include "mechprior/network.hpp"

namespace mechprior {

enum class Strategy { CppGpUcb, CppRandom, GpUcbBaseline, RandomBaseline };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);
inline bool is_cpp(Strategy s) { return s == Strategy::CppGpUcb || s == Strategy::CppRandom; }

// Reward prior f(I, .) for one context.
class PriorModel {
 public:
  virtual ~PriorModel() = default;
  virtual ActionScore bind(const Mechanism& m, const ContextImage& image) const = 0;
};

class ZeroPrior final : public PriorModel {
 public:
  ActionScore bind(const Mechanism&, const ContextImage&) const override;
};

class NetworkPrior final : public PriorModel {
 public:
  explicit NetworkPrior(NetworkWeights w) : weights_(std::move(w)) {}
  ActionScore bind(const Mechanism& m, const ContextImage& image) const override;
  const NetworkWeights& weights() const { return weights_; }

 private:
  NetworkWeights weights_;
};

// The true reward surface; an upper bound on what any learned prior can provide.
class OraclePrior final : public PriorModel {
 public:
  ActionScore bind(const Mechanism& m, const ContextImage& image) const override;
};

KernelParams default_kernel(MechanismKind kind);

struct ExperimentConfig {
  MechanismKind kind = MechanismKind::Slider;
  int L = 100;
  int M = 100;
  int N = 50;
  int max_attempts = 100;
  double regret_threshold = 0.05;
  std::uint64_t seed = 0;  // experiment seed; every stochastic choice derives from it
  std::vector<std::uint64_t> model_seeds{0, 1, 2, 3, 4};
  std::vector<int> checkpoints{1, 2, 5, 10, 20, 40, 70, 100};
  std::vector<Strategy> strategies{Strategy::CppGpUcb, Strategy::CppRandom, Strategy::GpUcbBaseline,
                                   Strategy::RandomBaseline};
  KernelParams kernel = default_kernel(MechanismKind::Slider);
  AcquisitionConfig acquisition = default_acquisition(MechanismKind::Slider);
  TrainSchedule training;
  double beta = 4.0;
  int fit_interval = 1;            // refit after every k-th training mechanism (checkpoints always refit)
  bool charge_probes = false;      // count best-estimate probes as interactions
  bool collection_uses_prior = true;

  void validate() const;
};

ExperimentConfig default_config(MechanismKind kind);
nlohmann::json to_json(const ExperimentConfig& cfg);
// Missing fields take the per-kind defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Seed plan. Training seeds are even, evaluation seeds odd, so the sets never meet.
std::uint64_t training_mechanism_seed(const ExperimentConfig& cfg, std::uint64_t model_seed, int index);
std::uint64_t evaluation_mechanism_seed(const ExperimentConfig& cfg, int index);
std::vector<Mechanism> evaluation_mechanisms(const ExperimentConfig& cfg);

struct Attempt {
  Action action;
  double reward = 0.0;
  double regret = 1.0;  // best-estimate regret after this attempt
};

struct EvalRecord {
  std::uint64_t mech_seed = 0;
  double initial_regret = 1.0;  // best estimate before any interaction
  std::vector<Attempt> attempts;
  std::optional<int> attempts_to_success;  // empty on failure
  double final_regret = 1.0;
  std::size_t gp_observations = 0;

  int attempts_or_cap(int cap) const { return attempts_to_success.value_or(cap); }
};

// prior must be non-null for Cpp strategies and is ignored by baselines.
EvalRecord evaluate_one(Strategy strategy, const PriorModel* prior, const Mechanism& m, const ExperimentConfig& cfg,
                        std::uint64_t rng_seed);

struct Collection {
  Dataset data;
  std::map<int, NetworkWeights> snapshots;  // weights after each checkpoint L
  int fits = 0;
};

// Sequential training-data collection for one model seed.
Collection collect_training(const ExperimentConfig& cfg, Strategy strategy, std::uint64_t model_seed);

struct CurvePoint {
  Strategy strategy = Strategy::CppGpUcb;
  int L = 0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct CellResult {
  Strategy strategy = Strategy::CppGpUcb;
  int L = 0;
  std::uint64_t model_seed = 0;
  std::uint64_t mech_seed = 0;
  int attempts = -1;  // -1 marks failure
  double final_regret = 1.0;

  bool operator==(const CellResult&) const = default;
};

struct ExperimentResults {
  static constexpr std::string_view kVersion = "mechprior-results/1";

  std::vector<CellResult> cells;
  std::vector<CurvePoint> curves;
  int max_attempts = 100;

  bool operator==(const ExperimentResults&) const = default;
};

// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

std::vector<CurvePoint> aggregate(const std::vector<CellResult>& cells, int max_attempts);

struct RunArtifacts {
  std::map<std::pair<Strategy, std::uint64_t>, Collection> collections;
};

using ProgressFn = std::function<void(const std::string&)>;

ExperimentResults run_experiment(const ExperimentConfig& cfg, RunArtifacts* artifacts = nullptr,
                                 const ProgressFn& progress = {});

// Every configured strategy on the evaluation mechanisms, with the given weights as the prior for
// Cpp strategies. Cells are labelled with L and the first model seed.
ExperimentResults evaluate_weights(const ExperimentConfig& cfg, const NetworkWeights& weights, int L);

struct NnOnlyResult {
  std::uint64_t mech_seed = 0;
  double nn_regret = 1.0;   // regret of argmax of the prior alone
  double cpp_regret = 1.0;  // regret after at most `cap` GP-UCB interactions on top of the prior
};

std::vector<NnOnlyResult> nn_only_eval(const PriorModel& prior, const std::vector<Mechanism>& mechanisms,
                                       const ExperimentConfig& cfg, int cap = 10);

struct Histogram {
  std::size_t zero_count = 0;
  std::vector<double> edges;  // bins + 1 edges over [0, max reward]
  std::vector<std::size_t> counts;

  std::size_t total() const;
};

Histogram motion_histogram(const Dataset& data, int bins);
double zero_reward_fraction(const Dataset& data);

// results.json (versioned), cells.csv and curves.csv under dir.
void save_results(const ExperimentResults& results, const std::filesystem::path& dir);
ExperimentResults load_results(const std::filesystem::path& results_json);
void write_cells_csv(const ExperimentResults& results, std::ostream& out);
void write_curves_csv(const std::vector<CurvePoint>& curves, std::ostream& out);
std::vector<CurvePoint> read_curves_csv(std::istream& in);

class ResultsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mechprior
