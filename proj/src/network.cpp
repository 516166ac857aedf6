#include "mechprior/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "mechprior/kernels.hpp"
#include "mechprior/rng.hpp"

namespace mechprior {

using namespace arch;

namespace {

constexpr kernels::ConvShape kConv1{1, kImageSize, kImageSize, kConv1Channels, kKernel, kStride};
constexpr kernels::ConvShape kConv2{kConv1Channels, kConv1Size, kConv1Size, kConv2Channels, kKernel, kStride};
constexpr int kMapArea = kConv2Size * kConv2Size;
constexpr double kMinTemperature = 1e-2;
constexpr double kAdamEpsilon = 1e-8;

std::vector<LayerSpec> build_specs() {
  std::vector<LayerSpec> specs = {
      {"conv1.weight", {kConv1Channels, 1, kKernel, kKernel}, 0, 0},
      {"conv1.bias", {kConv1Channels}, 0, 0},
      {"conv2.weight", {kConv2Channels, kConv1Channels, kKernel, kKernel}, 0, 0},
      {"conv2.bias", {kConv2Channels}, 0, 0},
      {"spatial_softmax.temperature", {1}, 0, 0},
      {"action.hidden.weight", {kActionHidden, kActionInputs}, 0, 0},
      {"action.hidden.bias", {kActionHidden}, 0, 0},
      {"action.out.weight", {kActionFeatures, kActionHidden}, 0, 0},
      {"action.out.bias", {kActionFeatures}, 0, 0},
      {"dist.fc1.weight", {kRegressorHidden, kJointFeatures}, 0, 0},
      {"dist.fc1.bias", {kRegressorHidden}, 0, 0},
      {"dist.fc2.weight", {kRegressorHidden, kRegressorHidden}, 0, 0},
      {"dist.fc2.bias", {kRegressorHidden}, 0, 0},
      {"dist.fc3.weight", {1, kRegressorHidden}, 0, 0},
      {"dist.fc3.bias", {1}, 0, 0},
  };
  std::size_t offset = 0;
  for (auto& s : specs) {
    s.size = std::accumulate(s.shape.begin(), s.shape.end(), std::size_t{1},
                             [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
    s.offset = offset;
    offset += s.size;
  }
  return specs;
}

// y = W x + b for W laid out [out][in].
void affine(std::span<const double> weight, std::span<const double> bias, const double* x, int in, int out,
            double* y) {
  for (int i = 0; i < out; ++i) {
    const double* row = weight.data() + std::size_t(i) * in;
    double acc = bias[i];
    for (int j = 0; j < in; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void relu(const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

struct EncoderCache {
  std::vector<double> conv1_pre = std::vector<double>(kConv1.out_size());
  std::vector<double> conv1_out = std::vector<double>(kConv1.out_size());
  std::vector<double> conv2_pre = std::vector<double>(kConv2.out_size());
  std::vector<double> conv2_out = std::vector<double>(kConv2.out_size());
  std::vector<double> softmax = std::vector<double>(kConv2.out_size());
  ImageFeatures features{};
};

struct HeadCache {
  std::array<double, kActionInputs> action{};
  std::array<double, kActionHidden> action_pre{};
  std::array<double, kActionHidden> action_hidden{};
  std::array<double, kJointFeatures> joint{};
  std::array<double, kRegressorHidden> h1_pre{};
  std::array<double, kRegressorHidden> h1{};
  std::array<double, kRegressorHidden> h2_pre{};
  std::array<double, kRegressorHidden> h2{};
  double output = 0.0;
};

double grid_coord(int index, int count) {
  return count > 1 ? -1.0 + 2.0 * index / (count - 1) : 0.0;
}

// Writes per-location softmax weights and returns (x, y) expectations channel-major.
void spatial_softmax_impl(const double* maps, int channels, int height, int width, double temperature,
                          double* weights, double* points) {
  const int area = height * width;
  for (int c = 0; c < channels; ++c) {
    const double* m = maps + std::size_t(c) * area;
    double* s = weights + std::size_t(c) * area;
    const double peak = *std::max_element(m, m + area);
    double total = 0.0;
    for (int k = 0; k < area; ++k) {
      s[k] = std::exp((m[k] - peak) / temperature);
      total += s[k];
    }
    double ex = 0.0;
    double ey = 0.0;
    for (int i = 0; i < height; ++i) {
      const double y = grid_coord(i, height);
      for (int j = 0; j < width; ++j) {
        double& sk = s[i * width + j];
        sk /= total;
        ex += sk * grid_coord(j, width);
        ey += sk * y;
      }
    }
    points[2 * c] = ex;
    points[2 * c + 1] = ey;
  }
}

void encode(const NetworkWeights& w, const ContextImage& image, EncoderCache& cache, bool serial) {
  auto forward = serial ? kernels::conv_relu_forward_serial : kernels::conv_relu_forward;
  forward(kConv1, image.pixels, w.layer(Layer::Conv1Weight), w.layer(Layer::Conv1Bias), cache.conv1_pre,
          cache.conv1_out);
  forward(kConv2, cache.conv1_out, w.layer(Layer::Conv2Weight), w.layer(Layer::Conv2Bias), cache.conv2_pre,
          cache.conv2_out);
  spatial_softmax_impl(cache.conv2_out.data(), kConv2Channels, kConv2Size, kConv2Size, w.temperature(),
                       cache.softmax.data(), cache.features.data());
}

void pad_action(std::span<const double> action, std::array<double, kActionInputs>& out) {
  if (action.size() > kActionInputs) throw std::invalid_argument("action has too many components");
  out.fill(0.0);
  std::copy(action.begin(), action.end(), out.begin());
}

double head_forward(const NetworkWeights& w, const ImageFeatures& features, HeadCache& c) {
  affine(w.layer(Layer::ActionHiddenWeight), w.layer(Layer::ActionHiddenBias), c.action.data(), kActionInputs,
         kActionHidden, c.action_pre.data());
  relu(c.action_pre.data(), c.action_hidden.data(), kActionHidden);
  std::copy(features.begin(), features.end(), c.joint.begin());
  affine(w.layer(Layer::ActionOutWeight), w.layer(Layer::ActionOutBias), c.action_hidden.data(), kActionHidden,
         kActionFeatures, c.joint.data() + kImageFeatures);
  affine(w.layer(Layer::Dist1Weight), w.layer(Layer::Dist1Bias), c.joint.data(), kJointFeatures, kRegressorHidden,
         c.h1_pre.data());
  relu(c.h1_pre.data(), c.h1.data(), kRegressorHidden);
  affine(w.layer(Layer::Dist2Weight), w.layer(Layer::Dist2Bias), c.h1.data(), kRegressorHidden, kRegressorHidden,
         c.h2_pre.data());
  relu(c.h2_pre.data(), c.h2.data(), kRegressorHidden);
  affine(w.layer(Layer::Dist3Weight), w.layer(Layer::Dist3Bias), c.h2.data(), kRegressorHidden, 1, &c.output);
  return c.output;
}

// grad_x = W^T grad_y (overwritten); accumulates grad_W += grad_y x^T, grad_b += grad_y.
void affine_backward(std::span<const double> weight, const double* x, const double* grad_y, int in, int out,
                     std::span<double> grad_weight, std::span<double> grad_bias, double* grad_x) {
  if (grad_x != nullptr) std::fill(grad_x, grad_x + in, 0.0);
  for (int i = 0; i < out; ++i) {
    const double g = grad_y[i];
    grad_bias[i] += g;
    if (g == 0.0) continue;
    const double* row = weight.data() + std::size_t(i) * in;
    double* grow = grad_weight.data() + std::size_t(i) * in;
    for (int j = 0; j < in; ++j) {
      grow[j] += g * x[j];
      if (grad_x != nullptr) grad_x[j] += g * row[j];
    }
  }
}

void relu_backward(const double* pre, double* grad, int n) {
  for (int i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

// Accumulates head gradients for d loss / d output = g; adds d loss / d features into grad_features.
void head_backward(const NetworkWeights& w, const HeadCache& c, double g, NetworkWeights& grad,
                   ImageFeatures& grad_features) {
  std::array<double, kRegressorHidden> gh2{};
  std::array<double, kRegressorHidden> gh1{};
  std::array<double, kJointFeatures> gjoint{};
  std::array<double, kActionHidden> gah{};

  affine_backward(w.layer(Layer::Dist3Weight), c.h2.data(), &g, kRegressorHidden, 1, grad.layer(Layer::Dist3Weight),
                  grad.layer(Layer::Dist3Bias), gh2.data());
  relu_backward(c.h2_pre.data(), gh2.data(), kRegressorHidden);
  affine_backward(w.layer(Layer::Dist2Weight), c.h1.data(), gh2.data(), kRegressorHidden, kRegressorHidden,
                  grad.layer(Layer::Dist2Weight), grad.layer(Layer::Dist2Bias), gh1.data());
  relu_backward(c.h1_pre.data(), gh1.data(), kRegressorHidden);
  affine_backward(w.layer(Layer::Dist1Weight), c.joint.data(), gh1.data(), kJointFeatures, kRegressorHidden,
                  grad.layer(Layer::Dist1Weight), grad.layer(Layer::Dist1Bias), gjoint.data());
  for (int i = 0; i < kImageFeatures; ++i) grad_features[i] += gjoint[i];
  affine_backward(w.layer(Layer::ActionOutWeight), c.action_hidden.data(), gjoint.data() + kImageFeatures,
                  kActionHidden, kActionFeatures, grad.layer(Layer::ActionOutWeight), grad.layer(Layer::ActionOutBias),
                  gah.data());
  relu_backward(c.action_pre.data(), gah.data(), kActionHidden);
  affine_backward(w.layer(Layer::ActionHiddenWeight), c.action.data(), gah.data(), kActionInputs, kActionHidden,
                  grad.layer(Layer::ActionHiddenWeight), grad.layer(Layer::ActionHiddenBias), nullptr);
}

void encoder_backward(const NetworkWeights& w, const ContextImage& image, const EncoderCache& c,
                      const ImageFeatures& grad_features, NetworkWeights& grad, bool serial) {
  const double tau = w.temperature();
  std::vector<double> grad_maps(kConv2.out_size());
  double grad_tau = 0.0;
  for (int ch = 0; ch < kConv2Channels; ++ch) {
    const double gx = grad_features[2 * ch];
    const double gy = grad_features[2 * ch + 1];
    const double mean_g = gx * c.features[2 * ch] + gy * c.features[2 * ch + 1];
    const double* s = c.softmax.data() + std::size_t(ch) * kMapArea;
    const double* act = c.conv2_out.data() + std::size_t(ch) * kMapArea;
    double* gm = grad_maps.data() + std::size_t(ch) * kMapArea;
    for (int i = 0; i < kConv2Size; ++i) {
      const double y = grid_coord(i, kConv2Size);
      for (int j = 0; j < kConv2Size; ++j) {
        const int k = i * kConv2Size + j;
        const double gk = gx * grid_coord(j, kConv2Size) + gy * y;
        gm[k] = s[k] * (gk - mean_g) / tau;
        grad_tau -= gm[k] * act[k] / tau;
      }
    }
  }
  grad.layer(Layer::Temperature)[0] += grad_tau;

  relu_backward(c.conv2_pre.data(), grad_maps.data(), static_cast<int>(grad_maps.size()));
  std::vector<double> grad_conv1(kConv1.out_size());
  auto backward = serial ? kernels::conv_backward_serial : kernels::conv_backward;
  backward(kConv2, c.conv1_out, w.layer(Layer::Conv2Weight), grad_maps, grad.layer(Layer::Conv2Weight),
           grad.layer(Layer::Conv2Bias), grad_conv1);
  relu_backward(c.conv1_pre.data(), grad_conv1.data(), static_cast<int>(grad_conv1.size()));
  backward(kConv1, image.pixels, w.layer(Layer::Conv1Weight), grad_conv1, grad.layer(Layer::Conv1Weight),
           grad.layer(Layer::Conv1Bias), {});
}

struct GroupResult {
  double sq_error = 0.0;
  NetworkWeights gradient;
};

// Samples sharing one image: one encoder pass, per-sample heads, one encoder backward.
// reference_conv selects the direct-loop convolution instead of the GEMM path.
GroupResult group_loss_and_gradient(const NetworkWeights& w, std::span<const TrainingSample> batch,
                                    const std::vector<std::size_t>& members, double batch_size, bool reference_conv) {
  GroupResult r;
  const ContextImage& image = *batch[members.front()].image;
  EncoderCache enc;
  encode(w, image, enc, reference_conv);
  ImageFeatures grad_features{};
  HeadCache head;
  for (std::size_t idx : members) {
    const auto& sample = batch[idx];
    head.action = sample.action;
    const double err = head_forward(w, enc.features, head) - sample.reward;
    r.sq_error += err * err;
    head_backward(w, head, 2.0 * err / batch_size, r.gradient, grad_features);
  }
  encoder_backward(w, image, enc, grad_features, r.gradient, reference_conv);
  return r;
}

std::vector<std::vector<std::size_t>> group_by_image(std::span<const TrainingSample> batch) {
  std::vector<std::vector<std::size_t>> groups;
  std::map<const ContextImage*, std::size_t> slot;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].image == nullptr) throw std::invalid_argument("training sample without image");
    auto [it, inserted] = slot.emplace(batch[i].image, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

LossAndGradient reduce_groups(std::vector<GroupResult>& results, std::size_t batch_size) {
  LossAndGradient out;
  double sq = 0.0;
  for (const auto& r : results) {
    sq += r.sq_error;
    for (std::size_t k = 0; k < out.gradient.values.size(); ++k) out.gradient.values[k] += r.gradient.values[k];
  }
  out.loss = sq / static_cast<double>(batch_size);
  return out;
}

}  // namespace

const std::vector<LayerSpec>& layer_specs() {
  static const std::vector<LayerSpec> specs = build_specs();
  return specs;
}

std::size_t parameter_count() {
  const auto& s = layer_specs();
  return s.back().offset + s.back().size;
}

std::span<double> NetworkWeights::layer(Layer l) {
  const auto& s = layer_specs()[static_cast<std::size_t>(l)];
  return std::span<double>(values).subspan(s.offset, s.size);
}

std::span<const double> NetworkWeights::layer(Layer l) const {
  const auto& s = layer_specs()[static_cast<std::size_t>(l)];
  return std::span<const double>(values).subspan(s.offset, s.size);
}

NetworkWeights init_weights(std::uint64_t seed) {
  Rng rng(derive_seed({seed, 0x5eedULL}));
  NetworkWeights w;
  const auto& specs = layer_specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    auto values = w.layer(static_cast<Layer>(i));
    if (static_cast<Layer>(i) == Layer::Temperature) {
      values[0] = 1.0;
      continue;
    }
    // Weights: He-uniform on fan-in. Biases: uniform within 1/sqrt(fan-in) of the layer they feed.
    const bool is_bias = spec.shape.size() == 1;
    const auto& weight_spec = is_bias ? specs[i - 1] : spec;
    double fan_in = 1.0;
    for (std::size_t d = 1; d < weight_spec.shape.size(); ++d) fan_in *= weight_spec.shape[d];
    const double bound = is_bias ? 1.0 / std::sqrt(fan_in) : std::sqrt(6.0 / fan_in);
    for (double& v : values) v = uniform(rng, -bound, bound);
  }
  return w;
}

std::vector<double> spatial_softmax(std::span<const double> maps, int channels, int height, int width,
                                    double temperature) {
  if (height < 1 || width < 1) throw std::invalid_argument("feature maps must be nonempty");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (maps.size() != std::size_t(channels) * height * width) throw std::invalid_argument("feature map size mismatch");
  std::vector<double> weights(maps.size());
  std::vector<double> points(2 * std::size_t(channels));
  spatial_softmax_impl(maps.data(), channels, height, width, temperature, weights.data(), points.data());
  return points;
}

ImageFeatures encode_image(const NetworkWeights& w, const ContextImage& image) {
  EncoderCache cache;
  encode(w, image, cache, false);
  return cache.features;
}

double predict_from_features(const NetworkWeights& w, const ImageFeatures& features, std::span<const double> action) {
  HeadCache c;
  pad_action(action, c.action);
  return head_forward(w, features, c);
}

double predict_reward(const NetworkWeights& w, const ContextImage& image, std::span<const double> action) {
  return predict_from_features(w, encode_image(w, image), action);
}

LossAndGradient loss_and_gradient(const NetworkWeights& w, std::span<const TrainingSample> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto groups = group_by_image(batch);
  const double n = static_cast<double>(batch.size());
  std::vector<GroupResult> results(groups.size());
  if (groups.size() >= static_cast<std::size_t>(kernels::max_threads()) && groups.size() > 1) {
    kernels::parallel_for(groups.size(), [&](std::size_t g) {
      results[g] = group_loss_and_gradient(w, batch, groups[g], n, false);
    });
  } else {
    for (std::size_t g = 0; g < groups.size(); ++g) results[g] = group_loss_and_gradient(w, batch, groups[g], n, false);
  }
  return reduce_groups(results, batch.size());
}

LossAndGradient loss_and_gradient_serial(const NetworkWeights& w, std::span<const TrainingSample> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto groups = group_by_image(batch);
  const double n = static_cast<double>(batch.size());
  std::vector<GroupResult> results(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) results[g] = group_loss_and_gradient(w, batch, groups[g], n, true);
  return reduce_groups(results, batch.size());
}

void Dataset::add(const Mechanism& m, Action action, double reward) {
  if (!std::isfinite(reward) || reward < 0.0) throw std::invalid_argument("reward must be finite and nonnegative");
  if (!action_bounds(m.kind).contains(action)) throw BoundsViolation("dataset action outside bounds");
  const auto key = std::make_pair(m.seed, m.kind);
  auto it = std::find(image_keys_.rbegin(), image_keys_.rend(), key);
  std::size_t idx;
  if (it == image_keys_.rend()) {
    idx = images_.size();
    images_.push_back(render(m));
    image_keys_.push_back(key);
  } else {
    idx = static_cast<std::size_t>(std::distance(it, image_keys_.rend()) - 1);
  }
  records_.push_back({m.seed, m.kind, std::move(action), reward});
  image_index_.push_back(idx);
}

std::vector<TrainingSample> Dataset::samples() const {
  std::vector<TrainingSample> out(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    out[i].image = &images_[image_index_[i]];
    pad_action(records_[i].action, out[i].action);
    out[i].reward = records_[i].reward;
  }
  return out;
}

void Dataset::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) {
    nlohmann::json j = {{"mech_seed", r.mechanism_id}, {"kind", to_string(r.kind)}, {"action", r.action},
                        {"reward", r.reward}};
    out << j.dump() << '\n';
  }
}

Dataset Dataset::read_jsonl(std::istream& in) {
  Dataset d;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto m = generate_mechanism(parse_kind(j.at("kind").get<std::string>()), j.at("mech_seed").get<std::uint64_t>());
      d.add(m, j.at("action").get<Action>(), j.at("reward").get<double>());
    } catch (const std::exception& e) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return d;
}

void TrainSchedule::validate() const {
  if (epochs < 1 || batch_size < 1) throw std::invalid_argument("epochs and batch size must be positive");
  if (max_steps < 0) throw std::invalid_argument("max_steps must be nonnegative");
  if (!(step_size > 0.0)) throw std::invalid_argument("step size must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("moment decays must lie in (0, 1)");
  }
}

FitResult fit(const NetworkWeights& w, const Dataset& data, const TrainSchedule& sched, std::uint64_t seed) {
  if (data.empty()) throw std::invalid_argument("fit requires a nonempty dataset");
  sched.validate();

  FitResult result{w, {}};
  auto& params = result.weights.values;
  const auto samples = data.samples();
  std::vector<std::size_t> order(samples.size());
  std::vector<double> m1(params.size(), 0.0);
  std::vector<double> m2(params.size(), 0.0);
  std::vector<TrainingSample> batch;
  batch.reserve(static_cast<std::size_t>(sched.batch_size));
  const std::size_t tau_index = layer_specs()[static_cast<std::size_t>(Layer::Temperature)].offset;
  long step = 0;

  for (int epoch = 0; epoch < sched.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed({seed, static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), rng);

    double epoch_sq = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += batch.capacity()) {
      if (sched.max_steps > 0 && step >= sched.max_steps) break;
      batch.clear();
      const std::size_t stop = std::min(order.size(), start + batch.capacity());
      for (std::size_t i = start; i < stop; ++i) batch.push_back(samples[order[i]]);

      auto lg = loss_and_gradient(result.weights, batch);
      if (!std::isfinite(lg.loss)) {
        throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch + 1) + ", step " +
                            std::to_string(step + 1));
      }
      epoch_sq += lg.loss * static_cast<double>(batch.size());
      seen += batch.size();

      ++step;
      const double c1 = 1.0 - std::pow(sched.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(sched.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < params.size(); ++k) {
        const double g = lg.gradient.values[k];
        m1[k] = sched.beta1 * m1[k] + (1.0 - sched.beta1) * g;
        m2[k] = sched.beta2 * m2[k] + (1.0 - sched.beta2) * g * g;
        params[k] -= sched.step_size * (m1[k] / c1) / (std::sqrt(m2[k] / c2) + kAdamEpsilon);
      }
      params[tau_index] = std::max(params[tau_index], kMinTemperature);
    }
    if (seen == 0) break;
    result.epoch_loss.push_back(epoch_sq / static_cast<double>(seen));
  }
  return result;
}

double dataset_mse(const NetworkWeights& w, const Dataset& data) {
  if (data.empty()) return 0.0;
  const auto samples = data.samples();
  double sq = 0.0;
  const ContextImage* cached = nullptr;
  ImageFeatures features{};
  for (const auto& s : samples) {
    if (s.image != cached) {
      features = encode_image(w, *s.image);
      cached = s.image;
    }
    const double err = predict_from_features(w, features, s.action) - s.reward;
    sq += err * err;
  }
  return sq / static_cast<double>(samples.size());
}

nlohmann::json weights_to_json(const NetworkWeights& w) {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 0; i < layer_specs().size(); ++i) {
    const auto& spec = layer_specs()[i];
    auto v = w.layer(static_cast<Layer>(i));
    layers.push_back({{"name", spec.name}, {"shape", spec.shape}, {"values", std::vector<double>(v.begin(), v.end())}});
  }
  nlohmann::json arch_desc = {{"image_size", kImageSize},
                              {"conv_channels", {kConv1Channels, kConv2Channels}},
                              {"kernel", kKernel},
                              {"stride", kStride},
                              {"action_layers", {kActionInputs, kActionHidden, kActionFeatures}},
                              {"dist_layers", {kJointFeatures, kRegressorHidden, kRegressorHidden, 1}}};
  return {{"version", NetworkWeights::kVersion}, {"arch", arch_desc}, {"layers", layers}};
}

NetworkWeights weights_from_json(const nlohmann::json& j) {
  const auto version = j.at("version").get<std::string>();
  if (version != NetworkWeights::kVersion) throw std::runtime_error("unsupported weights version: " + version);
  const auto& layers = j.at("layers");
  const auto& specs = layer_specs();
  if (!layers.is_array() || layers.size() != specs.size()) throw std::runtime_error("weights: wrong layer count");
  NetworkWeights w;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& layer = layers[i];
    if (layer.at("name").get<std::string>() != specs[i].name) {
      throw std::runtime_error("weights: expected layer " + std::string(specs[i].name));
    }
    if (layer.at("shape").get<std::vector<int>>() != specs[i].shape) {
      throw std::runtime_error("weights: shape mismatch in " + std::string(specs[i].name));
    }
    const auto values = layer.at("values").get<std::vector<double>>();
    if (values.size() != specs[i].size) throw std::runtime_error("weights: size mismatch in " + std::string(specs[i].name));
    for (double v : values) {
      if (!std::isfinite(v)) throw std::runtime_error("weights: non-finite value in " + std::string(specs[i].name));
    }
    std::copy(values.begin(), values.end(), w.layer(static_cast<Layer>(i)).begin());
  }
  if (!(w.temperature() > 0.0)) throw std::runtime_error("weights: temperature must be positive");
  return w;
}

}  // namespace mechprior
