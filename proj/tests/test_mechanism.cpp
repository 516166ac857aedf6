#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mechprior/mechanism.hpp"
#include "mechprior/rng.hpp"
#include "oracles.hpp"

using namespace mechprior;
using std::numbers::pi;

namespace {

Mechanism slider(double phi, double length, double ox = 0.0, double oy = 0.0) {
  Mechanism m;
  m.kind = MechanismKind::Slider;
  m.params = SliderParams{phi, length, {ox, oy}};
  return m;
}

Mechanism door(double r, int sign, double psi) {
  Mechanism m;
  m.kind = MechanismKind::Door;
  m.params = DoorParams{r, sign, psi, pi / 2};
  return m;
}

Action random_action(Rng& rng, MechanismKind kind) {
  const auto b = action_bounds(kind);
  Action a(b.dims());
  for (std::size_t d = 0; d < a.size(); ++d) a[d] = uniform(rng, b.low[d], b.high[d]);
  return a;
}

}  // namespace

TEST_CASE("generation is deterministic and in range") {
  CHECK(generate_mechanism(MechanismKind::Slider, 7) == generate_mechanism(MechanismKind::Slider, 7));
  CHECK(generate_mechanism(MechanismKind::Door, 7) == generate_mechanism(MechanismKind::Door, 7));
  CHECK_FALSE(generate_mechanism(MechanismKind::Slider, 7) == generate_mechanism(MechanismKind::Slider, 8));

  double lo = 1e9, hi = -1e9, sum = 0.0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const auto p = generate_mechanism(MechanismKind::Slider, s).slider();
    lo = std::min(lo, p.track_length);
    hi = std::max(hi, p.track_length);
    sum += p.track_length;
    REQUIRE(p.track_angle >= 0.0);
    REQUIRE(p.track_angle < pi);
    REQUIRE(std::abs(p.handle_offset[0]) <= 0.15);
    REQUIRE(std::abs(p.handle_offset[1]) <= 0.15);
  }
  CHECK(lo >= 0.10);
  CHECK(hi <= 0.50);
  CHECK(std::abs(sum / 10000 - 0.30) < 0.01);

  int plus = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto p = generate_mechanism(MechanismKind::Door, s).door();
    REQUIRE((p.hinge_sign == 1 || p.hinge_sign == -1));
    REQUIRE(p.radius >= 0.05);
    REQUIRE(p.radius <= 0.30);
    REQUIRE(std::abs(p.axis_pitch) <= pi / 4);
    REQUIRE(p.max_angle == pi / 2);
    plus += p.hinge_sign == 1;
  }
  CHECK(plus > 400);
  CHECK(plus < 600);
}

TEST_CASE("action bounds") {
  const auto s = action_bounds(MechanismKind::Slider);
  const auto d = action_bounds(MechanismKind::Door);
  CHECK(s.dims() == 2);
  CHECK(d.dims() == 3);
  CHECK(s.low[1] == -0.60);
  CHECK(s.high[1] == 0.60);
  CHECK(s.high[1] > SliderParams::kMaxLength);
  for (std::size_t i = 0; i < d.dims(); ++i) CHECK(d.low[i] < d.high[i]);

  Action a{5.0, -1.0};
  s.clip(a);
  CHECK(s.contains(a));
  CHECK(a[0] == s.high[0]);
  CHECK(a[1] == s.low[1]);
}

TEST_CASE("execute_action examples") {
  CHECK(execute_action(slider(0, 0.3), Action{0, 0.3}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(std::abs(execute_action(slider(0, 0.3), Action{pi / 2, 0.5})) < 1e-15);
  CHECK(execute_action(door(0.2, 1, 0), Action{0.2, pi / 2, 0}) == doctest::Approx(0.2 * pi / 2).epsilon(1e-14));
  CHECK(execute_action(slider(0.7, 0.4), Action{0.9, 0.35}) ==
        doctest::Approx(std::min(0.35 * std::cos(0.2), 0.4)).epsilon(1e-14));
  // Negative travel past the start gives nothing.
  CHECK(execute_action(slider(0, 0.3), Action{0, -0.3}) == 0.0);
  CHECK(execute_action(door(0.2, -1, 0), Action{0.2, pi / 2, 0}) == 0.0);
}

TEST_CASE("execute_action rejects out-of-bounds actions") {
  CHECK_THROWS_AS(execute_action(slider(0, 0.3), Action{0, 0.7}), BoundsViolation);
  CHECK_THROWS_AS(execute_action(slider(0, 0.3), Action{0}), BoundsViolation);
  CHECK_THROWS_AS(execute_action(door(0.2, 1, 0), Action{0.0, 0, 0}), BoundsViolation);
  CHECK_THROWS_AS(execute_action(door(0.2, 1, 0), Action{-0.1, 0, 0}), BoundsViolation);
  CHECK_THROWS_AS(execute_action(door(0.2, 1, 0), Action{0.2, 0, 2.0}), BoundsViolation);
}

TEST_CASE("execute_action matches an independent re-derivation") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto kind = i % 2 ? MechanismKind::Door : MechanismKind::Slider;
    const auto m = generate_mechanism(kind, rng());
    const auto a = random_action(rng, kind);
    double expect;
    if (kind == MechanismKind::Slider) {
      expect = oracle::slider_reward(m.slider().track_angle, m.slider().track_length, a[0], a[1]);
    } else {
      const auto& p = m.door();
      expect = oracle::door_reward(p.radius, p.hinge_sign, p.axis_pitch, p.max_angle, a[0], a[1], a[2]);
    }
    REQUIRE(std::abs(execute_action(m, a) - expect) <= 1e-12);
  }
}

TEST_CASE("reward properties") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto kind = i % 2 ? MechanismKind::Door : MechanismKind::Slider;
    const auto m = generate_mechanism(kind, i);
    const auto opt = oracle_optimal(m);
    REQUIRE(execute_action(m, opt.action) == opt.reward);
    const auto a = random_action(rng, kind);
    const double r = execute_action(m, a);
    REQUIRE(r >= 0.0);
    REQUIRE(r <= opt.reward);
    REQUIRE(execute_action(m, a) == r);
    if (kind == MechanismKind::Slider) {
      double flipped = a[0] + pi;
      if (flipped >= pi) flipped -= 2 * pi;
      REQUIRE(std::abs(execute_action(m, Action{flipped, -a[1]}) - r) < 1e-12);
    }
  }
}

TEST_CASE("oracle examples and lattice dominance") {
  CHECK(oracle_optimal(slider(1.0, 0.25)).reward == 0.25);
  CHECK(oracle_optimal(slider(1.0, 0.25)).action == Action{1.0, 0.25});
  CHECK(oracle_optimal(door(0.1, 1, 0.2)).reward == doctest::Approx(0.1 * pi / 2).epsilon(1e-15));
  CHECK(oracle_optimal(door(0.1, -1, 0.2)).action == Action{0.1, -pi / 2, 0.2});

  // Reduced lattice here; the full 100-per-dim sweep runs in the acceptance suite.
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (auto kind : {MechanismKind::Slider, MechanismKind::Door}) {
      const auto m = generate_mechanism(kind, s);
      const auto b = action_bounds(kind);
      const double rs = oracle_optimal(m).reward;
      const std::size_t n = 30;
      Action a(b.dims());
      double best = 0.0;
      std::size_t total = 1;
      for (std::size_t d = 0; d < b.dims(); ++d) total *= n;
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t d = b.dims(); d-- > 0;) {
          const std::size_t i = rest % n;
          a[d] = i == n - 1 ? b.high[d] : b.low[d] + (b.high[d] - b.low[d]) * double(i) / (n - 1);
          rest /= n;
        }
        best = std::max(best, execute_action(m, a));
      }
      REQUIRE(best <= rs + 1e-12);
    }
  }
}

TEST_CASE("normalized regret") {
  CHECK(normalized_regret(0.4, 0.4) == 0.0);
  CHECK(normalized_regret(0.4, 0.0) == 1.0);
  CHECK(normalized_regret(0.4, 0.2) == doctest::Approx(0.5));
  CHECK(normalized_regret(0.4, 0.5) == 0.0);
  CHECK(normalized_regret(0.4, -0.1) == 1.0);
}

TEST_CASE("slider rasterization on the axis-aligned case") {
  // Handle block at the canvas center.
  const auto img = render(slider(0.0, 0.25));
  const int c = kImageSize / 2;
  for (int r = 0; r < kImageSize; ++r) {
    for (int col = 0; col < kImageSize; ++col) {
      const bool in_handle = std::abs(r - c) <= 2 && std::abs(col - c) <= 2;
      REQUIRE((img.at(r, col) == 1.0) == in_handle);
      REQUIRE(img.at(r, col) >= 0.0);
      REQUIRE(img.at(r, col) <= 1.0);
    }
  }
  // 25 px of track to the right, nothing left of the handle.
  for (int col = c; col <= c + 25; ++col) CHECK(img.at(c, col) > 0.0);
  CHECK(img.at(c, c + 26) == 0.0);
  CHECK(img.at(c, c - 3) == 0.0);
  // The track is about two pixels wide.
  CHECK(img.at(c - 1, c + 10) > 0.0);
  CHECK(img.at(c + 1, c + 10) > 0.0);
  CHECK(img.at(c - 3, c + 10) == 0.0);
  CHECK(img.at(c + 3, c + 10) == 0.0);

  // 0.5 m would be 50 px; the canvas clips it at the right edge.
  const auto full = render(slider(0.0, 0.5));
  for (int col = c; col < kImageSize; ++col) CHECK(full.at(c, col) > 0.0);
}

TEST_CASE("rendering is deterministic and sensitive to parameters") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (auto kind : {MechanismKind::Slider, MechanismKind::Door}) {
      const auto m = generate_mechanism(kind, s);
      REQUIRE(render(m) == render(m));
    }
  }
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double phi = uniform(rng, 0.0, pi - 0.5);
    const double len = uniform(rng, 0.1, 0.5);
    const double ox = uniform(rng, -0.15, 0.15);
    const double oy = uniform(rng, -0.15, 0.15);
    const auto a = render(slider(phi, len, ox, oy));
    const auto b = render(slider(phi + 0.5, len, ox, oy));
    int differ = 0;
    for (std::size_t k = 0; k < a.pixels.size(); ++k) differ += a.pixels[k] != b.pixels[k];
    REQUIRE(differ >= 20);
  }
  // Hinge side and pitch are visible on doors.
  CHECK_FALSE(render(door(0.2, 1, 0.0)) == render(door(0.2, -1, 0.0)));
  CHECK_FALSE(render(door(0.2, 1, 0.0)) == render(door(0.2, 1, 0.3)));
  CHECK_FALSE(render(door(0.2, 1, 0.0)) == render(door(0.25, 1, 0.0)));
  // Handle area above the 0.5 fill is 3x3 px; the hinge column is darker than the fill.
  const auto d = render(door(0.2, 1, 0.0));
  const int c = kImageSize / 2;
  for (int r = 0; r < kImageSize; ++r) {
    for (int col = 0; col < kImageSize; ++col) {
      const bool in_handle = std::abs(r - c) <= 1 && std::abs(col - (c + 18)) <= 1;
      REQUIRE((d.at(r, col) == 1.0) == in_handle);
    }
  }
  CHECK(d.at(c, c + 1) > 0.0);
  CHECK(d.at(c, c + 1) < 0.5);
  CHECK(d.at(c, c + 5) == 0.5);
  CHECK(d.at(c, c - 2) == 0.0);
  CHECK(d.at(c, c + 20) > 0.0);
  CHECK(d.at(c, c + 22) == 0.0);
}

TEST_CASE("image distance tracks parameter distance") {
  for (auto kind : {MechanismKind::Slider, MechanismKind::Door}) {
    Rng rng(kind == MechanismKind::Slider ? 21 : 22);
    std::vector<double> pd, id;
    for (int i = 0; i < 1000; ++i) {
      const auto a = generate_mechanism(kind, rng());
      const auto b = generate_mechanism(kind, rng());
      double p = 0.0;
      if (kind == MechanismKind::Slider) {
        const auto &x = a.slider(), &y = b.slider();
        // Segment endpoints (start, end) in meters.
        const double ex = x.track_length * std::cos(x.track_angle) - y.track_length * std::cos(y.track_angle);
        const double ey = x.track_length * std::sin(x.track_angle) - y.track_length * std::sin(y.track_angle);
        const double sx = x.handle_offset[0] - y.handle_offset[0];
        const double sy = x.handle_offset[1] - y.handle_offset[1];
        p = std::hypot(sx, sy) + std::hypot(sx + ex, sy + ey);
      } else {
        const auto &x = a.door(), &y = b.door();
        p = std::abs(x.radius - y.radius) / 0.25 + (x.hinge_sign != y.hinge_sign) +
            std::abs(x.axis_pitch - y.axis_pitch) / (pi / 2);
      }
      const auto ia = render(a), ib = render(b);
      double l1 = 0.0;
      for (std::size_t k = 0; k < ia.pixels.size(); ++k) l1 += std::abs(ia.pixels[k] - ib.pixels[k]);
      pd.push_back(p);
      id.push_back(l1);
    }
    const double rho = oracle::spearman(pd, id);
    INFO("kind ", to_string(kind), " rho ", rho);
    // Thin tracks rarely overlap, so slider L1 saturates for most random pairs.
    CHECK(rho > (kind == MechanismKind::Door ? 0.3 : 0.2));
  }
}

TEST_CASE("mechanism JSON and PGM") {
  for (auto kind : {MechanismKind::Slider, MechanismKind::Door}) {
    const auto m = generate_mechanism(kind, 99);
    const auto j = to_json(m);
    CHECK(j.at("kind") == std::string(to_string(kind)));
    CHECK(j.at("seed") == 99);
    CHECK(j.contains("params"));
    CHECK(mechanism_from_json(j) == m);
    CHECK(mechanism_from_json(nlohmann::json::parse(j.dump())) == m);
  }
  CHECK(to_json(generate_mechanism(MechanismKind::Slider, 1))["params"].contains("track_angle"));
  CHECK(to_json(generate_mechanism(MechanismKind::Door, 1))["params"].contains("hinge_sign"));
  CHECK_THROWS(parse_kind("lever"));

  std::ostringstream a, b;
  const auto img = render(generate_mechanism(MechanismKind::Slider, 7));
  write_pgm(a, img);
  write_pgm(b, img);
  CHECK(a.str() == b.str());
  const std::string header = "P5\n64 64\n255\n";
  REQUIRE(a.str().size() == header.size() + 64 * 64);
  CHECK(a.str().substr(0, header.size()) == header);
}
