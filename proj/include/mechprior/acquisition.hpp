#pragma once

#include <functional>
#include <span>

#include "mechprior/gp.hpp"
#include "mechprior/mechanism.hpp"

namespace mechprior {

struct AcquisitionConfig {
  int grid_points = 25;
  int top_k = 5;
  int max_iterations = 100;
  double tolerance = 1e-6;

  void validate() const;
};

// Acquisition defaults per mechanism kind.
AcquisitionConfig default_acquisition(MechanismKind kind);

// Must be safe to call concurrently.
using ActionScore = std::function<double(std::span<const double>)>;

struct Maximum {
  Action action;
  double score = 0.0;
};

// Coarse lattice (endpoints included), then bounded Nelder-Mead from the top_k
// lattice points. Ties keep the lowest lattice index.
Maximum maximize(const ActionScore& score, const ActionBounds& bounds, const AcquisitionConfig& cfg);
Maximum maximize_serial(const ActionScore& score, const ActionBounds& bounds, const AcquisitionConfig& cfg);

// Lattice point `index`, first dimension varying slowest.
void lattice_point(const ActionBounds& bounds, int grid_points, std::size_t index, std::span<double> out);
std::size_t lattice_size(const ActionBounds& bounds, int grid_points);

// argmax prior(a) + mu(a) + sqrt(beta) sigma(a)
Action select_ucb_action(const ActionScore& prior, const GpState& gp, const ActionBounds& bounds, double beta,
                         const AcquisitionConfig& cfg);

// select_ucb_action with beta = 0.
Action best_estimate(const ActionScore& prior, const GpState& gp, const ActionBounds& bounds,
                     const AcquisitionConfig& cfg);

}  // namespace mechprior
