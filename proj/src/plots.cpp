#include "mechprior/plots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

namespace mechprior {

namespace {

constexpr double kPi = std::numbers::pi;

const char* kPalette[] = {"#d62728", "#17becf", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};

std::string svg_open(int width, int height) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      width, height);
}

struct Frame {
  double left = 70, right = 30, top = 30, bottom = 60;
  double width = 640, height = 420;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel,
                 const std::vector<double>& xticks, const std::vector<double>& yticks) {
  std::string s;
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", f.left,
                   f.py(f.y0), f.width - f.right, f.py(f.y0));
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", f.left,
                   f.py(f.y0), f.left, f.top);
  for (double t : xticks) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n", f.px(t),
                     f.py(f.y0) + 16, fmt::format("{:g}", t));
  }
  for (double t : yticks) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n", f.left - 6,
                     f.py(t) + 4, fmt::format("{:g}", t));
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                   (f.left + f.width - f.right) / 2, f.height - 18, xlabel);
  s += fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">{}</text>\n",
      (f.top + f.height - f.bottom) / 2, (f.top + f.height - f.bottom) / 2, ylabel);
  return s;
}

}  // namespace

PriorMap prior_map(const PriorModel& prior, const Mechanism& m, int resolution, std::optional<double> door_pitch) {
  if (resolution < 1) throw std::invalid_argument("prior map resolution must be positive");
  if (m.kind == MechanismKind::Door && !door_pitch) {
    throw UnsupportedKind("prior map is polar over slider actions; doors need a fixed pitch slice");
  }
  const ActionBounds bounds = action_bounds(m.kind);
  const ActionScore f = prior.bind(m, render(m));
  const auto optimum = oracle_optimal(m).action;

  PriorMap map;
  map.resolution = resolution;
  map.max_radius = m.kind == MechanismKind::Slider ? bounds.high[1] : bounds.high[0];
  for (int i = 0; i < resolution; ++i) map.angles.push_back(-kPi + (i + 0.5) * 2.0 * kPi / resolution);
  for (int j = 0; j < resolution; ++j) map.radii.push_back((j + 0.5) * map.max_radius / resolution);
  map.values.resize(static_cast<std::size_t>(resolution) * resolution);
  Action a(bounds.dims());
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      if (m.kind == MechanismKind::Slider) {
        a = {map.angles[i], map.radii[j]};
      } else {
        a = {map.radii[j], map.angles[i], *door_pitch};
      }
      map.values[static_cast<std::size_t>(i) * resolution + j] = f(a);
    }
  }
  if (m.kind == MechanismKind::Slider) {
    map.marker_angle = optimum[0];
    map.marker_radius = optimum[1];
  } else {
    map.marker_angle = optimum[1];
    map.marker_radius = optimum[0];
  }
  return map;
}

std::string prior_map_svg(const PriorMap& map) {
  constexpr double kSize = 480;
  constexpr double kCenter = kSize / 2;
  constexpr double kRadius = 220;
  const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const int n = map.resolution;
  auto point = [&](double angle, double r) {
    return std::make_pair(kCenter + r * std::cos(angle), kCenter - r * std::sin(angle));
  };

  std::string s = svg_open(static_cast<int>(kSize), static_cast<int>(kSize));
  for (int i = 0; i < n; ++i) {
    const double a0 = -kPi + i * 2.0 * kPi / n;
    const double a1 = -kPi + (i + 1) * 2.0 * kPi / n;
    for (int j = 0; j < n; ++j) {
      const double r0 = j * kRadius / n;
      const double r1 = (j + 1) * kRadius / n;
      const double v = map.at(i, j);
      const int g = hi > lo ? static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo))) : 128;
      const int large = (a1 - a0) > kPi ? 1 : 0;
      auto [ox0, oy0] = point(a0, r1);
      auto [ox1, oy1] = point(a1, r1);
      auto [ix1, iy1] = point(a1, r0);
      auto [ix0, iy0] = point(a0, r0);
      // Arcs sweep counterclockwise on screen (sweep-flag 0 because y points down).
      s += fmt::format(
          "<path class=\"cell\" d=\"M {:.3f} {:.3f} A {:.3f} {:.3f} 0 {} 0 {:.3f} {:.3f} L {:.3f} {:.3f} A {:.3f} {:.3f} 0 {} 1 "
          "{:.3f} {:.3f} Z\" fill=\"rgb({},{},{})\" stroke=\"none\"/>\n",
          ox0, oy0, r1, r1, large, ox1, oy1, ix1, iy1, r0, r0, large, ix0, iy0, g, g, g);
    }
  }
  auto [mx, my] = point(map.marker_angle, map.marker_radius / map.max_radius * kRadius);
  s += fmt::format("<circle class=\"marker\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"5\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n",
                   mx, my);
  s += "</svg>\n";
  return s;
}

std::string curve_svg(const std::vector<CurvePoint>& curves, int max_attempts) {
  std::vector<Strategy> order;
  std::map<Strategy, std::vector<CurvePoint>> by_strategy;
  double max_l = 1.0;
  for (const auto& p : curves) {
    if (!by_strategy.contains(p.strategy)) order.push_back(p.strategy);
    by_strategy[p.strategy].push_back(p);
    max_l = std::max(max_l, static_cast<double>(p.L));
  }
  Frame f;
  f.x1 = max_l;
  f.y1 = max_attempts;

  std::vector<double> xticks;
  for (const auto& p : curves) {
    if (std::find(xticks.begin(), xticks.end(), p.L) == xticks.end()) xticks.push_back(p.L);
  }
  std::vector<double> yticks;
  for (int k = 0; k <= 4; ++k) yticks.push_back(max_attempts * k / 4.0);

  std::string s = svg_open(static_cast<int>(f.width), static_cast<int>(f.height));
  s += axes(f, "training mechanisms (L)", "interactions to success", xticks, yticks);
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto points = by_strategy[order[k]];
    std::stable_sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.L < b.L; });
    const char* color = kPalette[k % std::size(kPalette)];
    std::string band;
    for (const auto& p : points) band += fmt::format("{:.2f},{:.2f} ", f.px(p.L), f.py(p.q75));
    for (auto it = points.rbegin(); it != points.rend(); ++it) band += fmt::format("{:.2f},{:.2f} ", f.px(it->L), f.py(it->q25));
    std::string line;
    for (const auto& p : points) line += fmt::format("{:.2f},{:.2f} ", f.px(p.L), f.py(p.median));
    s += fmt::format("<polygon class=\"band\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", band, color);
    s += fmt::format("<polyline class=\"median\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", line, color);
    for (const auto& p : points) {
      s += fmt::format("<circle class=\"point\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", f.px(p.L), f.py(p.median), color);
    }
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"{}\">{}</text>\n", f.width - f.right - 120,
                     f.top + 16 * (k + 1), color, to_string(order[k]));
  }
  s += "</svg>\n";
  return s;
}

std::string histogram_svg(const Histogram& h) {
  Frame f;
  const std::size_t bars = h.counts.size() + 1;
  std::size_t tallest = h.zero_count;
  for (auto c : h.counts) tallest = std::max(tallest, c);
  f.x0 = 0;
  f.x1 = static_cast<double>(bars);
  f.y1 = std::max<double>(1.0, static_cast<double>(tallest));

  std::vector<double> yticks;
  for (int k = 0; k <= 4; ++k) yticks.push_back(std::round(f.y1 * k / 4.0));
  std::string s = svg_open(static_cast<int>(f.width), static_cast<int>(f.height));
  s += axes(f, "distance moved (m)", "count", {}, yticks);
  for (std::size_t b = 0; b < bars; ++b) {
    const std::size_t count = b == 0 ? h.zero_count : h.counts[b - 1];
    const double x = f.px(static_cast<double>(b)) + 1;
    const double w = f.px(static_cast<double>(b + 1)) - f.px(static_cast<double>(b)) - 2;
    const double y = f.py(static_cast<double>(count));
    s += fmt::format("<rect class=\"bar\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", x, y,
                     w, f.py(0) - y, b == 0 ? "#888888" : "#1f77b4");
    const std::string label = b == 0 ? std::string("0") : fmt::format("{:.3f}", h.edges[b]);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"9\" text-anchor=\"middle\">{}</text>\n", x + w / 2,
                     f.py(0) + 14, label);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace mechprior
