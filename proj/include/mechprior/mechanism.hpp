#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mechprior {

enum class MechanismKind { Slider, Door };

std::string_view to_string(MechanismKind kind);
MechanismKind parse_kind(std::string_view text);

struct SliderParams {
  double track_angle = 0.0;   // phi in [0, pi)
  double track_length = 0.3;  // meters in [0.10, 0.50]
  std::array<double, 2> handle_offset{0.0, 0.0};

  static constexpr double kMinLength = 0.10;
  static constexpr double kMaxLength = 0.50;
  static constexpr double kMaxOffset = 0.15;

  bool operator==(const SliderParams&) const = default;
};

struct DoorParams {
  double radius = 0.2;      // meters in [0.05, 0.30]
  int hinge_sign = 1;       // +1 or -1
  double axis_pitch = 0.0;  // radians in [-pi/4, pi/4]
  double max_angle = std::numbers::pi / 2;

  static constexpr double kMinRadius = 0.05;
  static constexpr double kMaxRadius = 0.30;
  static constexpr double kMaxPitch = std::numbers::pi / 4;
  static constexpr double kAngleLimit = std::numbers::pi / 2;

  // Reward falloff widths on parameter mismatch.
  static constexpr double kRadiusFalloff = 0.025;
  static constexpr double kPitchFalloff = 0.15;

  bool operator==(const DoorParams&) const = default;
};

struct Mechanism {
  MechanismKind kind = MechanismKind::Slider;
  std::variant<SliderParams, DoorParams> params;
  std::uint64_t seed = 0;

  const SliderParams& slider() const { return std::get<SliderParams>(params); }
  const DoorParams& door() const { return std::get<DoorParams>(params); }

  bool operator==(const Mechanism&) const = default;
};

// Action coordinates. Slider: (pitch, q). Door: (radius, angle, pitch).
using Action = std::vector<double>;

struct ActionBounds {
  std::vector<double> low;
  std::vector<double> high;

  std::size_t dims() const { return low.size(); }
  bool contains(std::span<const double> a) const;
  void clip(std::span<double> a) const;
};

class BoundsViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kImageSize = 64;
inline constexpr double kPixelsPerMeter = 100.0;

struct ContextImage {
  std::vector<double> pixels = std::vector<double>(kImageSize * kImageSize, 0.0);

  double at(int row, int col) const { return pixels[row * kImageSize + col]; }
  double& at(int row, int col) { return pixels[row * kImageSize + col]; }

  bool operator==(const ContextImage&) const = default;
};

Mechanism generate_mechanism(MechanismKind kind, std::uint64_t seed);

ContextImage render(const Mechanism& m);

// Distance the handle moves. Throws BoundsViolation for out-of-bounds actions.
double execute_action(const Mechanism& m, std::span<const double> a);

struct OptimalAction {
  Action action;
  double reward = 0.0;
};

OptimalAction oracle_optimal(const Mechanism& m);

ActionBounds action_bounds(MechanismKind kind);

// Normalized simple regret (r* - r) / r*, clamped to [0, 1].
double normalized_regret(double optimal_reward, double reward);

nlohmann::json to_json(const Mechanism& m);
Mechanism mechanism_from_json(const nlohmann::json& j);

void write_pgm(std::ostream& out, const ContextImage& image);

}  // namespace mechprior
