#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mechprior/mechanism.hpp"

namespace mechprior {

// Fixed architecture of the reward prior:
//   image 64x64 -> conv 8@3x3/2 -> ReLU -> conv 16@3x3/2 -> ReLU -> spatial softmax (32)
//   action (3, zero padded) -> affine 32 -> ReLU -> affine 16
//   [image features; action features] (48) -> 64 -> ReLU -> 64 -> ReLU -> 1
namespace arch {
inline constexpr int kConv1Channels = 8;
inline constexpr int kConv2Channels = 16;
inline constexpr int kKernel = 3;
inline constexpr int kStride = 2;
inline constexpr int kConv1Size = (kImageSize - kKernel) / kStride + 1;  // 31
inline constexpr int kConv2Size = (kConv1Size - kKernel) / kStride + 1;  // 15
inline constexpr int kImageFeatures = 2 * kConv2Channels;                // 32
inline constexpr int kActionInputs = 3;
inline constexpr int kActionHidden = 32;
inline constexpr int kActionFeatures = 16;
inline constexpr int kJointFeatures = kImageFeatures + kActionFeatures;  // 48
inline constexpr int kRegressorHidden = 64;
}  // namespace arch

enum class Layer {
  Conv1Weight, Conv1Bias, Conv2Weight, Conv2Bias, Temperature,
  ActionHiddenWeight, ActionHiddenBias, ActionOutWeight, ActionOutBias,
  Dist1Weight, Dist1Bias, Dist2Weight, Dist2Bias, Dist3Weight, Dist3Bias,
};
inline constexpr std::size_t kLayerCount = 15;

struct LayerSpec {
  std::string_view name;
  std::vector<int> shape;
  std::size_t offset;
  std::size_t size;
};

// Layer descriptors in declared (serialization) order.
const std::vector<LayerSpec>& layer_specs();
std::size_t parameter_count();

// All parameters of the prior network in one flat buffer. Gradients use the same type.
struct NetworkWeights {
  static constexpr std::string_view kVersion = "mechprior-weights/1";

  std::vector<double> values = std::vector<double>(parameter_count(), 0.0);

  std::span<double> layer(Layer l);
  std::span<const double> layer(Layer l) const;
  double temperature() const { return layer(Layer::Temperature)[0]; }

  bool operator==(const NetworkWeights&) const = default;
};

NetworkWeights init_weights(std::uint64_t seed);

// Spatial softmax over C x H x W maps; returns (x, y) expectations per channel, x/y in [-1, 1].
std::vector<double> spatial_softmax(std::span<const double> maps, int channels, int height, int width,
                                    double temperature);

using ImageFeatures = std::array<double, arch::kImageFeatures>;

// Image half of the network; depends only on the image, so it can be cached per context.
ImageFeatures encode_image(const NetworkWeights& w, const ContextImage& image);
double predict_from_features(const NetworkWeights& w, const ImageFeatures& features, std::span<const double> action);
double predict_reward(const NetworkWeights& w, const ContextImage& image, std::span<const double> action);

struct TrainingSample {
  const ContextImage* image = nullptr;
  std::array<double, arch::kActionInputs> action{};
  double reward = 0.0;
};

struct LossAndGradient {
  double loss = 0.0;
  NetworkWeights gradient;
};

// Mean squared error over the batch and its gradient with respect to every parameter.
// Samples sharing an image pointer share one pass through the convolutional encoder.
LossAndGradient loss_and_gradient(const NetworkWeights& w, std::span<const TrainingSample> batch);
LossAndGradient loss_and_gradient_serial(const NetworkWeights& w, std::span<const TrainingSample> batch);

// Accumulated interaction data. Images are stored once per mechanism.
class Dataset {
 public:
  struct Record {
    std::uint64_t mechanism_id = 0;
    MechanismKind kind = MechanismKind::Slider;
    Action action;
    double reward = 0.0;
  };

  // Adds a record; renders and caches the mechanism's image on first sight.
  void add(const Mechanism& m, Action action, double reward);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<Record>& records() const { return records_; }
  const ContextImage& image(std::size_t record_index) const { return images_[image_index_[record_index]]; }

  std::vector<TrainingSample> samples() const;

  // One JSON object per line: {mech_seed, kind, action, reward}.
  void write_jsonl(std::ostream& out) const;
  static Dataset read_jsonl(std::istream& in);

 private:
  std::vector<Record> records_;
  std::vector<std::size_t> image_index_;
  std::vector<ContextImage> images_;
  std::vector<std::pair<std::uint64_t, MechanismKind>> image_keys_;
};

struct TrainSchedule {
  int epochs = 40;
  int batch_size = 64;
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  int max_steps = 0;  // cap on optimizer steps per fit; 0 = run every epoch in full

  void validate() const;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitResult {
  NetworkWeights weights;
  std::vector<double> epoch_loss;  // mean training loss seen during each epoch
};

// Adam over seeded shuffled minibatches, starting from w.
FitResult fit(const NetworkWeights& w, const Dataset& data, const TrainSchedule& sched, std::uint64_t seed);

double dataset_mse(const NetworkWeights& w, const Dataset& data);

nlohmann::json weights_to_json(const NetworkWeights& w);
NetworkWeights weights_from_json(const nlohmann::json& j);

}  // namespace mechprior
