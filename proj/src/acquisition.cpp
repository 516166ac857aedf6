#include "mechprior/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mechprior/kernels.hpp"

namespace mechprior {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;  // negated score: the simplex minimizes
};

// Bounded Nelder-Mead maximizing score from start. Returns the best point seen;
// a point replaces the incumbent only on strict improvement.
Maximum nelder_mead(const ActionScore& score, const ActionBounds& bounds, std::span<const double> start,
                    double start_score, const std::vector<double>& step, const AcquisitionConfig& cfg) {
  const std::size_t n = start.size();
  Maximum best{Action(start.begin(), start.end()), start_score};
  auto eval = [&](std::vector<double>& x) {
    bounds.clip(x);
    const double s = score(x);
    if (s > best.score) best = {x, s};
    return -s;
  };

  std::vector<Vertex> simplex;
  simplex.push_back({best.action, -start_score});
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<double> x = best.action;
    // Step inward when the start sits on the upper bound.
    x[d] += (x[d] + step[d] <= bounds.high[d]) ? step[d] : -step[d];
    const double f = eval(x);
    simplex.push_back({std::move(x), f});
  }

  std::vector<double> centroid(n);
  auto along = [&](const std::vector<double>& from, double t) {
    std::vector<double> x(n);
    for (std::size_t d = 0; d < n; ++d) x[d] = centroid[d] + t * (from[d] - centroid[d]);
    return x;
  };

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    double spread = simplex.back().f - simplex.front().f;
    double size = 0.0;
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t d = 0; d < n; ++d) {
        size = std::max(size, std::abs(simplex[v].x[d] - simplex[0].x[d]) / (bounds.high[d] - bounds.low[d]));
      }
    }
    if (spread <= cfg.tolerance && size <= cfg.tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[v].x[d] / static_cast<double>(n);
    }
    Vertex& worst = simplex.back();
    auto reflected = along(worst.x, -1.0);
    const double fr = eval(reflected);
    if (fr < simplex.front().f) {
      auto expanded = along(worst.x, -2.0);
      const double fe = eval(expanded);
      worst = fe < fr ? Vertex{std::move(expanded), fe} : Vertex{std::move(reflected), fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {std::move(reflected), fr};
    } else {
      const bool outside = fr < worst.f;
      auto contracted = outside ? along(worst.x, -0.5) : along(worst.x, 0.5);
      const double fc = eval(contracted);
      if (fc < std::min(fr, worst.f)) {
        worst = {std::move(contracted), fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t d = 0; d < n; ++d) {
            simplex[v].x[d] = simplex[0].x[d] + 0.5 * (simplex[v].x[d] - simplex[0].x[d]);
          }
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
  }
  return best;
}

Maximum maximize_impl(const ActionScore& score, const ActionBounds& bounds, const AcquisitionConfig& cfg,
                      bool serial) {
  cfg.validate();
  const std::size_t dims = bounds.dims();
  const std::size_t count = lattice_size(bounds, cfg.grid_points);
  auto point_at = [&](std::size_t i, std::span<double> out) { lattice_point(bounds, cfg.grid_points, i, out); };
  const auto scores = serial ? kernels::score_points_serial(count, dims, point_at, score)
                             : kernels::score_points(count, dims, point_at, score);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.top_k), count);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });

  std::vector<double> step(dims);
  for (std::size_t d = 0; d < dims; ++d) step[d] = 0.5 * (bounds.high[d] - bounds.low[d]) / (cfg.grid_points - 1);

  Maximum best;
  std::vector<double> start(dims);
  for (std::size_t r = 0; r < k; ++r) {
    lattice_point(bounds, cfg.grid_points, order[r], start);
    Maximum refined = nelder_mead(score, bounds, start, scores[order[r]], step, cfg);
    if (r == 0 || refined.score > best.score) best = std::move(refined);
  }
  return best;
}

}  // namespace

void AcquisitionConfig::validate() const {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points per dimension");
  if (top_k < 1 || max_iterations < 1) throw std::invalid_argument("top_k and iteration cap must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

AcquisitionConfig default_acquisition(MechanismKind kind) {
  AcquisitionConfig cfg;
  cfg.grid_points = kind == MechanismKind::Slider ? 25 : 12;
  return cfg;
}

std::size_t lattice_size(const ActionBounds& bounds, int grid_points) {
  std::size_t n = 1;
  for (std::size_t d = 0; d < bounds.dims(); ++d) n *= static_cast<std::size_t>(grid_points);
  return n;
}

void lattice_point(const ActionBounds& bounds, int grid_points, std::size_t index, std::span<double> out) {
  const std::size_t g = static_cast<std::size_t>(grid_points);
  for (std::size_t d = bounds.dims(); d-- > 0;) {
    const std::size_t i = index % g;
    index /= g;
    out[d] = i + 1 == g ? bounds.high[d]
                        : bounds.low[d] + (bounds.high[d] - bounds.low[d]) * static_cast<double>(i) / (grid_points - 1);
  }
}

Maximum maximize(const ActionScore& score, const ActionBounds& bounds, const AcquisitionConfig& cfg) {
  return maximize_impl(score, bounds, cfg, false);
}

Maximum maximize_serial(const ActionScore& score, const ActionBounds& bounds, const AcquisitionConfig& cfg) {
  return maximize_impl(score, bounds, cfg, true);
}

Action select_ucb_action(const ActionScore& prior, const GpState& gp, const ActionBounds& bounds, double beta,
                         const AcquisitionConfig& cfg) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
  auto criterion = [&](std::span<const double> a) { return ucb_score(gp, prior(a), a, beta); };
  return maximize(criterion, bounds, cfg).action;
}

Action best_estimate(const ActionScore& prior, const GpState& gp, const ActionBounds& bounds,
                     const AcquisitionConfig& cfg) {
  return select_ucb_action(prior, gp, bounds, 0.0, cfg);
}

}  // namespace mechprior
