#pragma once

// Central finite-difference check of loss_and_gradient over every parameter.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mechprior/network.hpp"
#include "mechprior/rng.hpp"

namespace gradcheck {

struct Instance {
  mechprior::NetworkWeights weights;
  std::vector<mechprior::ContextImage> images;
  std::vector<mechprior::TrainingSample> batch;
};

// Random weights (He init plus perturbed biases and temperature), 2 images, 4 samples.
inline Instance make_instance(std::uint64_t seed) {
  using namespace mechprior;
  Rng rng(derive_seed({seed, 0x67726164}));
  Instance inst;
  inst.weights = init_weights(seed);
  for (auto l : {Layer::Conv1Bias, Layer::Conv2Bias, Layer::ActionHiddenBias, Layer::Dist1Bias, Layer::Dist2Bias}) {
    for (double& v : inst.weights.layer(l)) v += uniform(rng, -0.1, 0.1);
  }
  inst.weights.layer(Layer::Temperature)[0] = uniform(rng, 0.3, 3.0);
  for (int i = 0; i < 2; ++i) {
    const auto kind = (seed + i) % 2 ? MechanismKind::Door : MechanismKind::Slider;
    inst.images.push_back(render(generate_mechanism(kind, rng())));
  }
  for (int s = 0; s < 4; ++s) {
    TrainingSample t;
    t.image = &inst.images[s % 2];
    for (double& a : t.action) a = uniform(rng, -1.0, 1.0);
    t.reward = uniform(rng, 0.0, 0.5);
    inst.batch.push_back(t);
  }
  return inst;
}

// Mean squared error recomputed through the inference path.
inline double loss_with_features(const mechprior::NetworkWeights& w, const Instance& inst,
                                 const std::vector<mechprior::ImageFeatures>& features) {
  double sq = 0.0;
  for (const auto& s : inst.batch) {
    const std::size_t img = static_cast<std::size_t>(s.image - inst.images.data());
    const double e = mechprior::predict_from_features(w, features[img], s.action) - s.reward;
    sq += e * e;
  }
  return sq / static_cast<double>(inst.batch.size());
}

inline double loss(const mechprior::NetworkWeights& w, const Instance& inst) {
  std::vector<mechprior::ImageFeatures> f;
  for (const auto& im : inst.images) f.push_back(mechprior::encode_image(w, im));
  return loss_with_features(w, inst, f);
}

struct Report {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst = 0.0;
  double loss_error = 0.0;  // |loss_and_gradient.loss - recomputed loss|
};

inline double rel_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

// grad must come from loss_and_gradient (or its serial twin) at inst.weights.
// The image encoder only depends on the convolution and temperature parameters, so
// the remaining parameters are perturbed on cached features.
inline Report check(const Instance& inst, const mechprior::LossAndGradient& lg, double tol = 1e-4) {
  using namespace mechprior;
  Report rep;
  rep.loss_error = std::abs(lg.loss - loss(inst.weights, inst));
  const auto& specs = layer_specs();
  const std::size_t encoder_end = specs[static_cast<std::size_t>(Layer::Temperature)].offset + 1;
  std::vector<ImageFeatures> cached;
  for (const auto& im : inst.images) cached.push_back(encode_image(inst.weights, im));

  NetworkWeights w = inst.weights;
  auto eval = [&](std::size_t i) { return i < encoder_end ? loss(w, inst) : loss_with_features(w, inst, cached); };
  auto central = [&](std::size_t i, double h) {
    const double orig = w.values[i];
    w.values[i] = orig + h;
    const double up = eval(i);
    w.values[i] = orig - h;
    const double down = eval(i);
    w.values[i] = orig;
    return (up - down) / (2.0 * h);
  };
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double g = lg.gradient.values[i];
    const double h = 1e-5 * std::max(1.0, std::abs(w.values[i]));
    double err = rel_error(g, central(i, h));
    // Tiny gradients drown in round-off: retry with a Richardson-extrapolated wider stencil.
    if (err > tol) err = std::min(err, rel_error(g, (4.0 * central(i, 5.0 * h) - central(i, 10.0 * h)) / 3.0));
    // A ReLU kink inside the stencil spoils the wide steps but not a narrow one.
    if (err > tol) err = std::min(err, rel_error(g, central(i, h * 0.01)));
    rep.worst = std::max(rep.worst, err);
    rep.failed += err > tol;
    ++rep.checked;
  }
  return rep;
}

}  // namespace gradcheck
