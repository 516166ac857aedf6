#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mechprior {

struct KernelParams {
  std::vector<double> lengthscales;
  double signal_variance = 0.04;
  double noise_variance = 1e-6;

  // Always added to the diagonal on top of noise_variance.
  static constexpr double kNoiseFloor = 1e-8;

  void validate() const;
};

double sqexp_kernel(std::span<const double> a, std::span<const double> b, const KernelParams& k);

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact GP regression state. Immutable once built: add_observation returns a new state.
class GpState {
 public:
  explicit GpState(KernelParams kernel);

  // Builds the state from a batch of observations in one factorization.
  static GpState from_observations(KernelParams kernel, std::vector<std::vector<double>> inputs,
                                   std::vector<double> targets);

  [[nodiscard]] GpState add_observation(std::span<const double> a, double residual) const;

  Posterior posterior(std::span<const double> a) const;

  std::size_t size() const { return targets_.size(); }
  std::size_t dims() const { return kernel_.lengthscales.size(); }
  const KernelParams& kernel() const { return kernel_; }
  const std::vector<std::vector<double>>& inputs() const { return inputs_; }
  const std::vector<double>& targets() const { return targets_; }
  double jitter() const { return jitter_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }
  const Eigen::VectorXd& weights() const { return alpha_; }

 private:
  void refactor();

  KernelParams kernel_;
  std::vector<std::vector<double>> inputs_;
  std::vector<double> targets_;
  Eigen::MatrixXd chol_;   // lower triangular
  Eigen::VectorXd alpha_;  // (K + s I)^-1 y
  double jitter_ = 0.0;    // extra diagonal beyond noise + floor
};

// prior_mean + mu + sqrt(beta) * sigma
double ucb_score(const GpState& s, double prior_mean, std::span<const double> a, double beta);

}  // namespace mechprior
