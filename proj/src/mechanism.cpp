#include "mechprior/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mechprior/rng.hpp"

namespace mechprior {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCanvasCenter = kImageSize / 2;
constexpr double kTrackIntensity = 0.6;
constexpr double kDoorFill = 0.5;
constexpr double kHingeIntensity = 0.3;
constexpr double kDoorHalfHeight = 12.0;
constexpr int kSupersample = 4;

double slider_reward(const SliderParams& p, double pitch, double magnitude) {
  double projected = magnitude * std::cos(pitch - p.track_angle);
  return std::clamp(projected, 0.0, p.track_length);
}

double door_reward(const DoorParams& p, double radius, double angle, double pitch) {
  double dr = radius - p.radius;
  double dp = pitch - p.axis_pitch;
  double align = std::exp(-dr * dr / (2.0 * DoorParams::kRadiusFalloff * DoorParams::kRadiusFalloff)) *
                 std::exp(-dp * dp / (2.0 * DoorParams::kPitchFalloff * DoorParams::kPitchFalloff));
  double achieved = std::clamp(p.hinge_sign * angle * align, 0.0, p.max_angle);
  return p.radius * achieved;
}

void render_slider(const SliderParams& p, ContextImage& img) {
  const double sx = kCanvasCenter + p.handle_offset[0] * kPixelsPerMeter;
  const double sy = kCanvasCenter - p.handle_offset[1] * kPixelsPerMeter;
  const double len = p.track_length * kPixelsPerMeter;
  const double dx = std::cos(p.track_angle);
  const double dy = -std::sin(p.track_angle);

  for (int row = 0; row < kImageSize; ++row) {
    for (int col = 0; col < kImageSize; ++col) {
      double rx = col - sx;
      double ry = row - sy;
      double along = rx * dx + ry * dy;
      double perp = std::abs(-rx * dy + ry * dx);
      // 2 px wide with a one-pixel linear ramp; flat end caps.
      double cover_perp = std::clamp(1.5 - perp, 0.0, 1.0);
      double cover_along = std::clamp(std::min(along + 0.5, len + 0.5 - along), 0.0, 1.0);
      img.at(row, col) = kTrackIntensity * cover_perp * cover_along;
    }
  }

  const int hr = static_cast<int>(std::lround(sy));
  const int hc = static_cast<int>(std::lround(sx));
  for (int row = hr - 2; row <= hr + 2; ++row) {
    for (int col = hc - 2; col <= hc + 2; ++col) {
      if (row >= 0 && row < kImageSize && col >= 0 && col < kImageSize) img.at(row, col) = 1.0;
    }
  }
}

// Intensity of the door drawing at a point in door-local coordinates:
// u runs from the hinge (u = 0) toward the handle, v across the door.
// The handle is centered two pixels in from the free edge so it stays inside the door.
double door_intensity(double u, double v, double width) {
  if (u < 0.0 || u > width || std::abs(v) > kDoorHalfHeight) return 0.0;
  if (std::abs(u - (std::round(width) - 2.0)) <= 1.5 && std::abs(v) <= 1.5) return 1.0;
  if (u < 1.0) return kHingeIntensity;
  return kDoorFill;
}

void render_door(const DoorParams& p, ContextImage& img) {
  const double width = p.radius * kPixelsPerMeter;
  // Opening direction in image space: rotated by the axis pitch, mirrored by the hinge side.
  const double ux = p.hinge_sign * std::cos(p.axis_pitch);
  const double uy = -p.hinge_sign * std::sin(p.axis_pitch);
  const double vx = -uy;
  const double vy = ux;

  for (int row = 0; row < kImageSize; ++row) {
    for (int col = 0; col < kImageSize; ++col) {
      double acc = 0.0;
      for (int sr = 0; sr < kSupersample; ++sr) {
        for (int sc = 0; sc < kSupersample; ++sc) {
          double x = col - 0.5 + (sc + 0.5) / kSupersample - kCanvasCenter;
          double y = row - 0.5 + (sr + 0.5) / kSupersample - kCanvasCenter;
          acc += door_intensity(x * ux + y * uy, x * vx + y * vy, width);
        }
      }
      img.at(row, col) = acc / (kSupersample * kSupersample);
    }
  }
}

}  // namespace

std::string_view to_string(MechanismKind kind) {
  return kind == MechanismKind::Slider ? "slider" : "door";
}

MechanismKind parse_kind(std::string_view text) {
  if (text == "slider" || text == "Slider") return MechanismKind::Slider;
  if (text == "door" || text == "Door") return MechanismKind::Door;
  throw std::invalid_argument("unknown mechanism kind: " + std::string(text));
}

bool ActionBounds::contains(std::span<const double> a) const {
  if (a.size() != low.size()) return false;
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (!(a[d] >= low[d] && a[d] <= high[d])) return false;
  }
  return true;
}

void ActionBounds::clip(std::span<double> a) const {
  for (std::size_t d = 0; d < a.size(); ++d) a[d] = std::clamp(a[d], low[d], high[d]);
}

Mechanism generate_mechanism(MechanismKind kind, std::uint64_t seed) {
  Rng rng(derive_seed({seed, static_cast<std::uint64_t>(kind)}));
  Mechanism m;
  m.kind = kind;
  m.seed = seed;
  if (kind == MechanismKind::Slider) {
    SliderParams p;
    p.track_angle = uniform(rng, 0.0, kPi);
    p.track_length = uniform(rng, SliderParams::kMinLength, SliderParams::kMaxLength);
    p.handle_offset[0] = uniform(rng, -SliderParams::kMaxOffset, SliderParams::kMaxOffset);
    p.handle_offset[1] = uniform(rng, -SliderParams::kMaxOffset, SliderParams::kMaxOffset);
    m.params = p;
  } else {
    DoorParams p;
    p.radius = uniform(rng, DoorParams::kMinRadius, DoorParams::kMaxRadius);
    p.hinge_sign = uniform(rng, 0.0, 1.0) < 0.5 ? 1 : -1;
    p.axis_pitch = uniform(rng, -DoorParams::kMaxPitch, DoorParams::kMaxPitch);
    p.max_angle = DoorParams::kAngleLimit;
    m.params = p;
  }
  return m;
}

ContextImage render(const Mechanism& m) {
  ContextImage img;
  if (m.kind == MechanismKind::Slider) {
    render_slider(m.slider(), img);
  } else {
    render_door(m.door(), img);
  }
  return img;
}

ActionBounds action_bounds(MechanismKind kind) {
  if (kind == MechanismKind::Slider) return {{-kPi, -0.60}, {kPi, 0.60}};
  // Radius must stay positive; 1 mm stands in for the open lower end.
  return {{1e-3, -kPi, -kPi / 2}, {0.40, kPi, kPi / 2}};
}

double execute_action(const Mechanism& m, std::span<const double> a) {
  if (!action_bounds(m.kind).contains(a)) {
    throw BoundsViolation("action outside bounds for " + std::string(to_string(m.kind)));
  }
  if (m.kind == MechanismKind::Slider) return slider_reward(m.slider(), a[0], a[1]);
  return door_reward(m.door(), a[0], a[1], a[2]);
}

OptimalAction oracle_optimal(const Mechanism& m) {
  if (m.kind == MechanismKind::Slider) {
    const auto& p = m.slider();
    return {{p.track_angle, p.track_length}, p.track_length};
  }
  const auto& p = m.door();
  return {{p.radius, p.hinge_sign * p.max_angle, p.axis_pitch}, p.radius * p.max_angle};
}

double normalized_regret(double optimal_reward, double reward) {
  if (!(optimal_reward > 0.0)) throw std::invalid_argument("optimal reward must be positive");
  return std::clamp((optimal_reward - reward) / optimal_reward, 0.0, 1.0);
}

nlohmann::json to_json(const Mechanism& m) {
  nlohmann::json params;
  if (m.kind == MechanismKind::Slider) {
    const auto& p = m.slider();
    params = {{"track_angle", p.track_angle},
              {"track_length", p.track_length},
              {"handle_offset", {p.handle_offset[0], p.handle_offset[1]}}};
  } else {
    const auto& p = m.door();
    params = {{"radius", p.radius},
              {"hinge_sign", p.hinge_sign},
              {"axis_pitch", p.axis_pitch},
              {"max_angle", p.max_angle}};
  }
  return {{"kind", to_string(m.kind)}, {"seed", m.seed}, {"params", params}};
}

Mechanism mechanism_from_json(const nlohmann::json& j) {
  Mechanism m;
  m.kind = parse_kind(j.at("kind").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  const auto& params = j.at("params");
  if (m.kind == MechanismKind::Slider) {
    SliderParams p;
    p.track_angle = params.at("track_angle").get<double>();
    p.track_length = params.at("track_length").get<double>();
    p.handle_offset = params.at("handle_offset").get<std::array<double, 2>>();
    m.params = p;
  } else {
    DoorParams p;
    p.radius = params.at("radius").get<double>();
    p.hinge_sign = params.at("hinge_sign").get<int>();
    p.axis_pitch = params.at("axis_pitch").get<double>();
    p.max_angle = params.at("max_angle").get<double>();
    if (p.hinge_sign != 1 && p.hinge_sign != -1) throw std::invalid_argument("hinge_sign must be +1 or -1");
    m.params = p;
  }
  return m;
}

void write_pgm(std::ostream& out, const ContextImage& image) {
  out << "P5\n" << kImageSize << ' ' << kImageSize << "\n255\n";
  for (double v : image.pixels) {
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
  }
}

}  // namespace mechprior
