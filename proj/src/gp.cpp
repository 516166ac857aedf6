#include "mechprior/gp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mechprior {

namespace {

constexpr double kFirstJitter = 1e-8;
constexpr int kJitterAttempts = 3;

}  // namespace

void KernelParams::validate() const {
  if (lengthscales.empty()) throw std::invalid_argument("kernel needs at least one lengthscale");
  for (double l : lengthscales) {
    if (!(l > 0.0)) throw std::invalid_argument("lengthscales must be positive");
  }
  if (!(signal_variance > 0.0)) throw std::invalid_argument("signal variance must be positive");
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be nonnegative");
}

double sqexp_kernel(std::span<const double> a, std::span<const double> b, const KernelParams& k) {
  if (a.size() != k.lengthscales.size() || b.size() != k.lengthscales.size()) {
    throw std::invalid_argument("kernel dimension mismatch");
  }
  double r2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double z = (a[d] - b[d]) / k.lengthscales[d];
    r2 += z * z;
  }
  return k.signal_variance * std::exp(-0.5 * r2);
}

GpState::GpState(KernelParams kernel) : kernel_(std::move(kernel)) { kernel_.validate(); }

GpState GpState::from_observations(KernelParams kernel, std::vector<std::vector<double>> inputs,
                                   std::vector<double> targets) {
  if (inputs.size() != targets.size()) throw std::invalid_argument("inputs/targets size mismatch");
  GpState s(std::move(kernel));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != s.dims()) throw std::invalid_argument("observation dimension mismatch");
    if (!std::isfinite(targets[i])) throw std::invalid_argument("non-finite residual");
  }
  s.inputs_ = std::move(inputs);
  s.targets_ = std::move(targets);
  s.refactor();
  return s;
}

void GpState::refactor() {
  const auto n = static_cast<Eigen::Index>(targets_.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double v = sqexp_kernel(inputs_[i], inputs_[j], kernel_);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  const double base = kernel_.noise_variance + KernelParams::kNoiseFloor;
  double extra = 0.0;
  for (int attempt = 0; attempt <= kJitterAttempts; ++attempt) {
    Eigen::MatrixXd reg = gram;
    reg.diagonal().array() += base + extra;
    Eigen::LLT<Eigen::MatrixXd> llt(reg);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = extra;
      Eigen::Map<const Eigen::VectorXd> y(targets_.data(), n);
      alpha_ = llt.solve(y);
      return;
    }
    extra = attempt == 0 ? kFirstJitter : extra * 10.0;
  }
  throw FactorizationError("Gram matrix not positive definite after jitter escalation (n=" +
                           std::to_string(n) + ")");
}

GpState GpState::add_observation(std::span<const double> a, double residual) const {
  if (a.size() != dims()) throw std::invalid_argument("observation dimension mismatch");
  if (!std::isfinite(residual)) throw std::invalid_argument("non-finite residual");

  GpState next = *this;
  next.inputs_.emplace_back(a.begin(), a.end());
  next.targets_.push_back(residual);

  // Extend the factor by one row; fall back to a full refactorization if that fails.
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::VectorXd kvec(n);
  for (Eigen::Index i = 0; i < n; ++i) kvec(i) = sqexp_kernel(inputs_[i], a, kernel_);
  const double diag = sqexp_kernel(a, a, kernel_) + kernel_.noise_variance + KernelParams::kNoiseFloor + jitter_;
  Eigen::VectorXd row = n > 0 ? Eigen::VectorXd(chol_.triangularView<Eigen::Lower>().solve(kvec)) : Eigen::VectorXd();
  const double pivot = diag - row.squaredNorm();
  if (!(pivot > 0.0) || !std::isfinite(pivot)) {
    next.refactor();
    return next;
  }
  next.chol_ = Eigen::MatrixXd::Zero(n + 1, n + 1);
  next.chol_.topLeftCorner(n, n) = chol_;
  next.chol_.block(n, 0, 1, n) = row.transpose();
  next.chol_(n, n) = std::sqrt(pivot);
  Eigen::Map<const Eigen::VectorXd> y(next.targets_.data(), n + 1);
  auto lower = next.chol_.triangularView<Eigen::Lower>();
  next.alpha_ = lower.transpose().solve(lower.solve(y));
  return next;
}

Posterior GpState::posterior(std::span<const double> a) const {
  if (a.size() != dims()) throw std::invalid_argument("query dimension mismatch");
  const double prior_var = sqexp_kernel(a, a, kernel_);
  if (targets_.empty()) return {0.0, prior_var};
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::VectorXd kvec(n);
  for (Eigen::Index i = 0; i < n; ++i) kvec(i) = sqexp_kernel(inputs_[i], a, kernel_);
  const double mean = kvec.dot(alpha_);
  chol_.triangularView<Eigen::Lower>().solveInPlace(kvec);
  return {mean, std::max(0.0, prior_var - kvec.squaredNorm())};
}

double ucb_score(const GpState& s, double prior_mean, std::span<const double> a, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
  const Posterior p = s.posterior(a);
  return prior_mean + p.mean + std::sqrt(beta) * std::sqrt(p.variance);
}

}  // namespace mechprior
