#include "mechprior/kernels.hpp"

#include <algorithm>

#include <Eigen/Dense>
#include <omp.h>

namespace mechprior::kernels {

namespace {

inline void conv_channel_forward(const ConvShape& s, int co, const double* in, const double* weights,
                                 const double* bias, double* pre, double* out) {
  const int oh = s.out_height();
  const int ow = s.out_width();
  const int k = s.kernel;
  const double* wc = weights + std::size_t(co) * s.in_channels * k * k;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = bias[co];
      for (int ci = 0; ci < s.in_channels; ++ci) {
        const double* plane = in + std::size_t(ci) * s.in_height * s.in_width;
        const double* wk = wc + std::size_t(ci) * k * k;
        for (int ky = 0; ky < k; ++ky) {
          const double* rowp = plane + std::size_t(y * s.stride + ky) * s.in_width + x * s.stride;
          for (int kx = 0; kx < k; ++kx) acc += wk[ky * k + kx] * rowp[kx];
        }
      }
      const std::size_t o = (std::size_t(co) * oh + y) * ow + x;
      pre[o] = acc;
      out[o] = acc > 0.0 ? acc : 0.0;
    }
  }
}

inline void conv_channel_weight_grad(const ConvShape& s, int co, const double* in, const double* grad_pre,
                                     double* grad_weights, double* grad_bias) {
  const int oh = s.out_height();
  const int ow = s.out_width();
  const int k = s.kernel;
  double* gw = grad_weights + std::size_t(co) * s.in_channels * k * k;
  const double* g = grad_pre + std::size_t(co) * oh * ow;
  double gb = 0.0;
  for (int i = 0; i < oh * ow; ++i) gb += g[i];
  grad_bias[co] += gb;
  for (int ci = 0; ci < s.in_channels; ++ci) {
    const double* plane = in + std::size_t(ci) * s.in_height * s.in_width;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        double acc = 0.0;
        for (int y = 0; y < oh; ++y) {
          const double* rowp = plane + std::size_t(y * s.stride + ky) * s.in_width + kx;
          const double* grow = g + std::size_t(y) * ow;
          for (int x = 0; x < ow; ++x) acc += grow[x] * rowp[x * s.stride];
        }
        gw[(ci * k + ky) * k + kx] += acc;
      }
    }
  }
}

inline void conv_channel_input_grad(const ConvShape& s, int ci, const double* weights, const double* grad_pre,
                                    double* grad_in) {
  const int oh = s.out_height();
  const int ow = s.out_width();
  const int k = s.kernel;
  double* gi = grad_in + std::size_t(ci) * s.in_height * s.in_width;
  std::fill(gi, gi + std::size_t(s.in_height) * s.in_width, 0.0);
  for (int co = 0; co < s.out_channels; ++co) {
    const double* wk = weights + (std::size_t(co) * s.in_channels + ci) * k * k;
    const double* g = grad_pre + std::size_t(co) * oh * ow;
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        const double gv = g[y * ow + x];
        if (gv == 0.0) continue;
        for (int ky = 0; ky < k; ++ky) {
          double* rowp = gi + std::size_t(y * s.stride + ky) * s.in_width + x * s.stride;
          for (int kx = 0; kx < k; ++kx) rowp[kx] += gv * wk[ky * k + kx];
        }
      }
    }
  }
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;
using RowMap = Eigen::Map<RowMatrix>;

// Patch matrix: row (ci, ky, kx), column (y, x) of the output grid.
RowMatrix im2col(const ConvShape& s, const double* in) {
  const int oh = s.out_height();
  const int ow = s.out_width();
  const int k = s.kernel;
  const int rows = s.in_channels * k * k;
  RowMatrix patches(rows, oh * ow);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    const int ci = r / (k * k);
    const int ky = (r / k) % k;
    const int kx = r % k;
    const double* plane = in + std::size_t(ci) * s.in_height * s.in_width;
    double* dst = patches.data() + std::size_t(r) * oh * ow;
    for (int y = 0; y < oh; ++y) {
      const double* src = plane + std::size_t(y * s.stride + ky) * s.in_width + kx;
      for (int x = 0; x < ow; ++x) dst[y * ow + x] = src[x * s.stride];
    }
  }
  return patches;
}

// Scatter-add of patch gradients back onto the input grid; parallel over input channels.
void col2im(const ConvShape& s, const RowMatrix& patches, double* grad_in) {
  const int oh = s.out_height();
  const int ow = s.out_width();
  const int k = s.kernel;
#pragma omp parallel for schedule(static)
  for (int ci = 0; ci < s.in_channels; ++ci) {
    double* plane = grad_in + std::size_t(ci) * s.in_height * s.in_width;
    std::fill(plane, plane + std::size_t(s.in_height) * s.in_width, 0.0);
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const double* src = patches.data() + std::size_t((ci * k + ky) * k + kx) * oh * ow;
        for (int y = 0; y < oh; ++y) {
          double* dst = plane + std::size_t(y * s.stride + ky) * s.in_width + kx;
          for (int x = 0; x < ow; ++x) dst[x * s.stride] += src[y * ow + x];
        }
      }
    }
  }
}

}  // namespace

void conv_relu_forward(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                       std::span<const double> bias, std::span<double> pre, std::span<double> out) {
  const int area = s.out_height() * s.out_width();
  const int depth = s.in_channels * s.kernel * s.kernel;
  const RowMatrix patches = im2col(s, in.data());
  RowMap result(pre.data(), s.out_channels, area);
  result.noalias() = ConstRowMap(weights.data(), s.out_channels, depth) * patches;
#pragma omp parallel for schedule(static)
  for (int co = 0; co < s.out_channels; ++co) {
    for (int i = 0; i < area; ++i) {
      const std::size_t o = std::size_t(co) * area + i;
      pre[o] += bias[co];
      out[o] = pre[o] > 0.0 ? pre[o] : 0.0;
    }
  }
}

void conv_relu_forward_serial(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                              std::span<const double> bias, std::span<double> pre, std::span<double> out) {
  for (int co = 0; co < s.out_channels; ++co) {
    conv_channel_forward(s, co, in.data(), weights.data(), bias.data(), pre.data(), out.data());
  }
}

void conv_backward(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                   std::span<const double> grad_pre, std::span<double> grad_weights, std::span<double> grad_bias,
                   std::span<double> grad_in) {
  const int area = s.out_height() * s.out_width();
  const int depth = s.in_channels * s.kernel * s.kernel;
  const ConstRowMap grad(grad_pre.data(), s.out_channels, area);
  const RowMatrix patches = im2col(s, in.data());
  RowMap(grad_weights.data(), s.out_channels, depth).noalias() += grad * patches.transpose();
  for (int co = 0; co < s.out_channels; ++co) grad_bias[co] += grad.row(co).sum();
  if (!grad_in.empty()) {
    const RowMatrix grad_patches = ConstRowMap(weights.data(), s.out_channels, depth).transpose() * grad;
    col2im(s, grad_patches, grad_in.data());
  }
}

void conv_backward_serial(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                          std::span<const double> grad_pre, std::span<double> grad_weights,
                          std::span<double> grad_bias, std::span<double> grad_in) {
  for (int co = 0; co < s.out_channels; ++co) {
    conv_channel_weight_grad(s, co, in.data(), grad_pre.data(), grad_weights.data(), grad_bias.data());
  }
  if (!grad_in.empty()) {
    for (int ci = 0; ci < s.in_channels; ++ci) {
      conv_channel_input_grad(s, ci, weights.data(), grad_pre.data(), grad_in.data());
    }
  }
}

std::vector<double> score_points(std::size_t count, std::size_t dims, const PointFn& point_at, const ScoreFn& fn) {
  std::vector<double> scores(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel
  {
    std::vector<double> point(dims);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      point_at(static_cast<std::size_t>(i), point);
      scores[i] = fn(point);
    }
  }
  return scores;
}

std::vector<double> score_points_serial(std::size_t count, std::size_t dims, const PointFn& point_at,
                                        const ScoreFn& fn) {
  std::vector<double> scores(count);
  std::vector<double> point(dims);
  for (std::size_t i = 0; i < count; ++i) {
    point_at(i, point);
    scores[i] = fn(point);
  }
  return scores;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) job(static_cast<std::size_t>(i));
}

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int n) { omp_set_num_threads(std::max(1, n)); }

}  // namespace mechprior::kernels
