#include <doctest.h>

#include <cmath>

#include "mechprior/gp.hpp"
#include "mechprior/rng.hpp"
#include "oracles.hpp"

using namespace mechprior;

namespace {

KernelParams params(std::vector<double> ell, double sf2 = 0.04, double sn2 = 1e-6) {
  KernelParams k;
  k.lengthscales = std::move(ell);
  k.signal_variance = sf2;
  k.noise_variance = sn2;
  return k;
}

std::vector<double> point(Rng& rng, std::size_t dims) {
  std::vector<double> p(dims);
  for (auto& v : p) v = uniform(rng, -1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("kernel examples") {
  const auto k = params({1.0, 1.0}, 2.0);
  const std::vector<double> a{0, 0}, b{1, 0};
  CHECK(sqexp_kernel(a, b, k) == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-15));
  CHECK(sqexp_kernel(a, b, k) == doctest::Approx(1.21306).epsilon(1e-5));
  CHECK(sqexp_kernel(b, b, k) == 2.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = point(rng, 3), y = point(rng, 3);
    const auto k3 = params({0.3, 0.7, 1.1}, 0.5);
    REQUIRE(sqexp_kernel(x, y, k3) == sqexp_kernel(y, x, k3));
    REQUIRE(sqexp_kernel(x, y, k3) == doctest::Approx(oracle::sqexp(x, y, k3.lengthscales, 0.5)).epsilon(1e-14));
  }
  CHECK_THROWS(sqexp_kernel(std::vector<double>{0.0}, b, k));
}

TEST_CASE("kernel parameter validation") {
  CHECK_THROWS(params({0.0, 1.0}).validate());
  CHECK_THROWS(params({1.0}, 0.0).validate());
  CHECK_THROWS(params({1.0}, 1.0, -1.0).validate());
  CHECK_THROWS(params({}).validate());
  CHECK_NOTHROW(params({1.0}, 1.0, 0.0).validate());
  CHECK_THROWS(GpState(params({-1.0})));
}

TEST_CASE("posterior examples") {
  const GpState empty(params({0.5}, 0.04));
  const auto p = empty.posterior(std::vector<double>{0.3});
  CHECK(p.mean == 0.0);
  CHECK(p.variance == 0.04);

  const auto s = GpState(params({0.5}, 0.04, 1e-8)).add_observation(std::vector<double>{0.2}, 0.17);
  CHECK(std::abs(s.posterior(std::vector<double>{0.2}).mean - 0.17) < 1e-4);

  // Closed-form 2x2 inverse.
  const auto k = params({0.4}, 0.3, 1e-3);
  const GpState two = GpState(k).add_observation(std::vector<double>{-0.1}, 0.5).add_observation(std::vector<double>{0.35}, -0.2);
  const double d = k.noise_variance + KernelParams::kNoiseFloor + two.jitter();
  const double k11 = 0.3 + d, k22 = 0.3 + d, k12 = 0.3 * std::exp(-0.5 * std::pow(0.45 / 0.4, 2));
  const double det = k11 * k22 - k12 * k12;
  const double q = 0.1;
  const double ka = 0.3 * std::exp(-0.5 * std::pow((q + 0.1) / 0.4, 2));
  const double kb = 0.3 * std::exp(-0.5 * std::pow((q - 0.35) / 0.4, 2));
  const double wa = (k22 * 0.5 - k12 * -0.2) / det;
  const double wb = (-k12 * 0.5 + k11 * -0.2) / det;
  const double va = (k22 * ka - k12 * kb) / det;
  const double vb = (-k12 * ka + k11 * kb) / det;
  const auto post = two.posterior(std::vector<double>{q});
  CHECK(std::abs(post.mean - (ka * wa + kb * wb)) < 1e-10);
  CHECK(std::abs(post.variance - (0.3 - ka * va - kb * vb)) < 1e-10);
}

TEST_CASE("posterior matches direct inversion") {
  Rng rng(42);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t dims = 1 + inst % 3;
    std::vector<double> ell(dims);
    for (auto& e : ell) e = uniform(rng, 0.2, 1.5);
    const auto k = params(ell, uniform(rng, 0.01, 1.0), uniform(rng, 1e-6, 1e-2));
    const int n = static_cast<int>(rng() % 21);
    GpState s(k);
    oracle::Matrix x;
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
      x.push_back(point(rng, dims));
      y.push_back(uniform(rng, -0.5, 0.5));
      s = s.add_observation(x.back(), y.back());
    }
    const double diag = k.noise_variance + KernelParams::kNoiseFloor + s.jitter();
    for (int q = 0; q < 10; ++q) {
      const auto a = point(rng, dims);
      const auto expect = oracle::gp_posterior(x, y, ell, k.signal_variance, diag, a);
      const auto got = s.posterior(a);
      REQUIRE(std::abs(got.mean - expect.mean) < 1e-8);
      REQUIRE(std::abs(got.variance - expect.var) < 1e-8);
    }
  }
}

TEST_CASE("incremental and batch construction agree") {
  Rng rng(7);
  const auto k = params({0.3, 0.6}, 0.05, 1e-6);
  GpState inc(k);
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < 50; ++i) {
    xs.push_back(point(rng, 2));
    ys.push_back(uniform(rng, -0.2, 0.2));
    inc = inc.add_observation(xs.back(), ys.back());
  }
  const auto batch = GpState::from_observations(k, xs, ys);
  CHECK(inc.size() == 50);
  for (int q = 0; q < 50; ++q) {
    const auto a = point(rng, 2);
    REQUIRE(std::abs(inc.posterior(a).mean - batch.posterior(a).mean) < 1e-10);
    REQUIRE(std::abs(inc.posterior(a).variance - batch.posterior(a).variance) < 1e-10);
  }
  // The cached factor reproduces the regularized Gram matrix.
  const auto& chol = inc.cholesky();
  const double diag = k.noise_variance + KernelParams::kNoiseFloor + inc.jitter();
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double kij = sqexp_kernel(xs[i], xs[j], k) + (i == j ? diag : 0.0);
      worst = std::max(worst, std::abs((chol * chol.transpose())(i, j) - kij));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("value semantics, duplicates and invalid input") {
  const auto k = params({0.5}, 0.04, 1e-6);
  const GpState a = GpState(k).add_observation(std::vector<double>{0.1}, 0.2);
  const GpState b = a.add_observation(std::vector<double>{0.1}, 0.2);
  CHECK(a.size() == 1);
  CHECK(b.size() == 2);
  CHECK(a.posterior(std::vector<double>{0.5}).variance > 0.0);

  // Exact duplicates with only the floor on the diagonal: jitter has to step in.
  GpState d(params({0.5}, 1.0, 0.0));
  for (int i = 0; i < 5; ++i) d = d.add_observation(std::vector<double>{0.3}, 0.1);
  CHECK(d.size() == 5);
  CHECK(std::isfinite(d.posterior(std::vector<double>{0.3}).mean));

  CHECK_THROWS((void)a.add_observation(std::vector<double>{0.1}, std::nan("")));
  CHECK_THROWS((void)a.add_observation(std::vector<double>{0.1}, INFINITY));
  CHECK_THROWS((void)a.add_observation(std::vector<double>{0.1, 0.2}, 0.0));
  CHECK_THROWS(a.posterior(std::vector<double>{0.1, 0.2}));
}

TEST_CASE("variance properties") {
  Rng rng(9);
  for (int inst = 0; inst < 30; ++inst) {
    const auto k = params({0.4, 0.8}, 0.1, 1e-6);
    GpState s(k);
    for (int i = 0; i < 15; ++i) s = s.add_observation(point(rng, 2), uniform(rng, -1, 1));
    for (int q = 0; q < 20; ++q) {
      const auto a = point(rng, 2);
      const double before = s.posterior(a).variance;
      REQUIRE(before >= 0.0);
      REQUIRE(before <= k.signal_variance + 1e-9);
      const auto t = s.add_observation(a, uniform(rng, -1, 1));
      REQUIRE(t.posterior(a).variance <= before + 1e-12);
    }
  }
}

TEST_CASE("ucb score") {
  const GpState empty(params({0.5}, 0.01));
  const std::vector<double> a{0.0};
  CHECK(ucb_score(empty, 0.4, a, 4.0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_THROWS(ucb_score(empty, 0.4, a, -1.0));

  Rng rng(4);
  GpState s(params({0.5, 0.5}, 0.04));
  for (int i = 0; i < 8; ++i) s = s.add_observation(point(rng, 2), uniform(rng, -0.1, 0.1));
  for (int q = 0; q < 50; ++q) {
    const auto x = point(rng, 2);
    const auto p = s.posterior(x);
    REQUIRE(ucb_score(s, 0.25, x, 0.0) == 0.25 + p.mean);
    double prev = ucb_score(s, 0.25, x, 0.0);
    for (double beta : {0.1, 0.5, 1.0, 4.0, 16.0}) {
      const double v = ucb_score(s, 0.25, x, beta);
      REQUIRE(v >= prev);
      prev = v;
    }
  }
}
