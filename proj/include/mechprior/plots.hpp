#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mechprior/harness.hpp"

namespace mechprior {

class UnsupportedKind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Prior evaluated on a polar (direction x distance) grid of cell centers.
struct PriorMap {
  int resolution = 0;
  double max_radius = 0.0;
  std::vector<double> angles;  // angular cell centers
  std::vector<double> radii;   // radial cell centers
  std::vector<double> values;  // [angle][radius]
  double marker_angle = 0.0;   // oracle-optimal action
  double marker_radius = 0.0;

  double at(int angle_index, int radius_index) const { return values[angle_index * resolution + radius_index]; }
};

// Sliders: direction = pitch, distance = q. Doors need a fixed pitch slice: direction = opening
// angle, distance = radius.
PriorMap prior_map(const PriorModel& prior, const Mechanism& m, int resolution,
                   std::optional<double> door_pitch = std::nullopt);

std::string prior_map_svg(const PriorMap& map);
std::string curve_svg(const std::vector<CurvePoint>& curves, int max_attempts);
std::string histogram_svg(const Histogram& h);

}  // namespace mechprior
