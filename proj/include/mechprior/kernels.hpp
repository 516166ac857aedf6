#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Data-parallel inner loops. Each OpenMP kernel has a serial reference twin kept
// for tests and the benchmark. The convolution fast path is im2col + GEMM while its
// reference is the direct loop nest, so those two agree to rounding, not bit for bit.
namespace mechprior::kernels {

struct ConvShape {
  int in_channels;
  int in_height;
  int in_width;
  int out_channels;
  int kernel;
  int stride;

  int out_height() const { return (in_height - kernel) / stride + 1; }
  int out_width() const { return (in_width - kernel) / stride + 1; }
  std::size_t in_size() const { return std::size_t(in_channels) * in_height * in_width; }
  std::size_t out_size() const { return std::size_t(out_channels) * out_height() * out_width(); }
  std::size_t weight_size() const { return std::size_t(out_channels) * in_channels * kernel * kernel; }
};

// Valid (unpadded) strided convolution followed by ReLU.
// weights laid out [out][in][ky][kx]; pre receives the pre-activation.
void conv_relu_forward(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                       std::span<const double> bias, std::span<double> pre, std::span<double> out);
void conv_relu_forward_serial(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                              std::span<const double> bias, std::span<double> pre, std::span<double> out);

// Backward through the convolution given the gradient w.r.t. the pre-activation.
// Accumulates into grad_weights/grad_bias; grad_in is overwritten unless empty.
void conv_backward(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                   std::span<const double> grad_pre, std::span<double> grad_weights, std::span<double> grad_bias,
                   std::span<double> grad_in);
void conv_backward_serial(const ConvShape& s, std::span<const double> in, std::span<const double> weights,
                          std::span<const double> grad_pre, std::span<double> grad_weights,
                          std::span<double> grad_bias, std::span<double> grad_in);

// Evaluates fn at count points produced by point_at(i, out); fn must be safe to call concurrently.
using PointFn = std::function<void(std::size_t, std::span<double>)>;
using ScoreFn = std::function<double(std::span<const double>)>;
std::vector<double> score_points(std::size_t count, std::size_t dims, const PointFn& point_at, const ScoreFn& fn);
std::vector<double> score_points_serial(std::size_t count, std::size_t dims, const PointFn& point_at,
                                        const ScoreFn& fn);

// Runs job(i) for i in [0, count). Jobs must write disjoint outputs.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

// Worker count used by the parallel kernels.
int max_threads();
void set_max_threads(int n);

}  // namespace mechprior::kernels
