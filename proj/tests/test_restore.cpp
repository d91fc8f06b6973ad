#include <doctest.h>

#include <cmath>

#include "msdehaze/pipeline.hpp"
#include "msdehaze/restore.hpp"
#include "msdehaze/synth.hpp"
#include "oracles.hpp"

using namespace msdehaze;

TEST_CASE("sigmoid spot values") {
  const double eta = 0.25;
  CHECK(phi(eta, eta) == 0.5);
  CHECK(psi_amp(eta, eta) == 2.0);
  CHECK(std::fabs(phi(0.0, eta) - 1.0) <= 1e-13);
  CHECK(psi_amp(0.0, eta) == 1.0);
  CHECK(phi(2.0 * eta, eta) <= 1e-13);
  CHECK(psi_amp(2.0 * eta, eta) == 3.0);
  // Same identities at the heavy-haze setting.
  CHECK(phi(0.125, 0.125) == 0.5);
  CHECK(psi_amp(0.125, 0.125) == 2.0);
}

TEST_CASE("phi is strictly decreasing and stays in (0,1)") {
  const double eta = 0.25;
  double prev = phi(0.0, eta);
  CHECK(prev < 1.0);
  for (int k = 1; k <= 64; ++k) {
    const double t = k / 64.0;
    const double v = phi(t, eta);
    CHECK(v < prev);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    prev = v;
  }
}

TEST_CASE("base restoration inverts the haze model") {
  const Airlight a{{0.9, 0.95, 1.0}};
  const Image z = oracle::random_image(8, 6, 3, 42);

  // t = 1: no haze, identity.
  const Image ones(8, 6, 1, 1.0);
  const Image same = restore_base(z, ones, a, 0.25);
  for (std::size_t k = 0; k < z.size(); ++k)
    CHECK(same.data()[k] == doctest::Approx(z.data()[k]).epsilon(1e-15));

  // Z = A: pure airlight restores to A for any transmission.
  Image air(8, 6, 3);
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < air.plane_size(); ++k) air.plane(c)[k] = a[c];
  const Image t = oracle::random_image(8, 6, 1, 43, 0.05, 1.0);
  const Image back = restore_base(air, t, a, 0.25);
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < back.plane_size(); ++k)
      CHECK(back.plane(c)[k] == doctest::Approx(a[c]).epsilon(1e-15));
}

TEST_CASE("base restoration scalar check") {
  const Airlight a{{1.0, 1.0, 1.0}};
  Image z(1, 1, 3, 0.8);
  Image t(1, 1, 1, 0.1);  // below eta, so the divisor is eta = 0.25
  const Image out = restore_base(z, t, a, 0.25);
  for (int c = 0; c < 3; ++c)
    CHECK(out.at(0, 0, c) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("laplacian restoration approaches 1/t away from the haze") {
  const double eta = 0.25;
  const double t = 4.0 * eta;
  Image zl(3, 1, 1);
  zl.at(0, 0) = 0.5;
  zl.at(0, 1) = -0.3;
  zl.at(0, 2) = 1e-3;
  const Image tg(3, 1, 1, t);
  for (int level : {0, 1}) {
    const Image out = restore_laplacian(zl, tg, level, eta);
    for (int j = 0; j < 3; ++j)
      CHECK(std::fabs(out.at(0, j) - zl.at(0, j) / t) <=
            1e-6 * std::fabs(zl.at(0, j)));
  }
}

TEST_CASE("laplacian restoration keeps unit gain deep in the haze at level 0") {
  const double eta = 0.25;
  Image zl(3, 1, 1);
  zl.at(0, 0) = 1.0;
  zl.at(0, 1) = -0.7;
  zl.at(0, 2) = 0.01;
  const Image tg(3, 1, 1, 0.0);  // t -> 0: psi = 1 exactly
  const Image out = restore_laplacian(zl, tg, 0, eta);
  for (int j = 0; j < 3; ++j)
    CHECK(std::fabs(out.at(0, j) - zl.at(0, j)) <= 1e-6);
}

TEST_CASE("laplacian restoration gains 2.5x deep in the haze at level 1") {
  const double eta = 0.25;
  Image zl(2, 1, 1);
  zl.at(0, 0) = 0.4;
  zl.at(0, 1) = -0.2;
  const Image tg(2, 1, 1, 0.0);
  const Image out = restore_laplacian(zl, tg, 1, eta);
  // (1 - 1/2)/eta + (1/2)*1 = 2 + 0.5
  for (int j = 0; j < 2; ++j)
    CHECK(out.at(0, j) == doctest::Approx(2.5 * zl.at(0, j)).epsilon(1e-12));
}

TEST_CASE("single-scale baseline spot values") {
  const Airlight a{{1.0, 1.0, 1.0}};
  const Image z = oracle::random_image(6, 6, 3, 50, 0.1, 0.9);
  const Image ones(6, 6, 1, 1.0);
  const Image same = restore_single_scale(z, ones, a, 0.1);
  for (std::size_t k = 0; k < z.size(); ++k)
    CHECK(same.data()[k] == doctest::Approx(z.data()[k]).epsilon(1e-15));

  Image air(2, 2, 3, 1.0);
  const Image t_any = oracle::random_image(2, 2, 1, 51, 0.05, 1.0);
  const Image back = restore_single_scale(air, t_any, a, 0.1);
  for (std::size_t k = 0; k < back.size(); ++k)
    CHECK(back.data()[k] == doctest::Approx(1.0).epsilon(1e-15));

  Image dark(1, 1, 3, 0.9);
  Image zero_t(1, 1, 1, 0.0);
  const Image out = restore_single_scale(dark, zero_t, a, 0.1);
  for (int c = 0; c < 3; ++c) CHECK(out.at(0, 0, c) == doctest::Approx(0.0));
}

TEST_CASE("multi-scale matches the baseline where transmission is high") {
  // With t well above 4*eta the level blend collapses to 1/t everywhere, so
  // the pyramid path and the plain inversion agree to within 2% of range.
  const Airlight a{{0.92, 0.94, 0.97}};
  HazeScene scene;
  scene.clean = make_cell_texture(96, 96, 16, 303);
  scene.depth.assign(scene.clean.plane_size(), -std::log(0.6));
  scene.airlight = a;
  const Image hazy = synthesize(scene);

  PipelineConfig cfg;
  cfg.eta = 0.125;  // 4*eta = 0.5 < t
  DehazeOptions opt;
  opt.airlight = a;
  const Image multi = dehaze(hazy, cfg, opt).output;
  opt.single_scale = true;
  const Image single = dehaze(hazy, cfg, opt).output;
  CHECK(oracle::max_abs_diff(multi, single) <= 0.02);
}

TEST_CASE("dehaze maps a constant airlight image to itself") {
  const Image img(32, 32, 3, 0.8);
  const DehazeResult res = dehaze(img);
  for (std::size_t k = 0; k < res.output.size(); ++k)
    CHECK(res.output.data()[k] == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("dehaze leaves a haze-free image nearly unchanged") {
  // Every pixel keeps a pinned dark red channel, so the dark channel of
  // every window sits near zero and the estimated transmission stays ~1.
  Image clean(96, 96, 3);
  for (int i = 0; i < 96; ++i)
    for (int j = 0; j < 96; ++j) {
      const std::uint64_t cell = (static_cast<std::uint64_t>(i / 16) << 8) + j / 16;
      clean.at(i, j, 0) = 0.02;
      clean.at(i, j, 1) = 0.3 + 0.6 * uniform01(7, 2 * cell);
      clean.at(i, j, 2) = 0.3 + 0.6 * uniform01(7, 2 * cell + 1);
    }
  DehazeOptions opt;
  opt.airlight = Airlight{{0.97, 0.97, 0.97}};
  const DehazeResult res = dehaze(clean, {}, opt);
  double max_err = 0.0;
  for (std::size_t k = 0; k < clean.size(); ++k)
    max_err = std::max(max_err, std::fabs(res.output.data()[k] - clean.data()[k]));
  CHECK(max_err <= 0.05);
}

TEST_CASE("dehaze output stays in range and is deterministic") {
  const Airlight a{{0.92, 0.94, 0.97}};
  HazeScene scene = make_layered_scene(64, 64, 3, 1.0, a, 5);
  scene.noise_std = 0.01;
  const Image hazy = synthesize(scene);
  const DehazeResult r1 = dehaze(hazy);
  const DehazeResult r2 = dehaze(hazy);
  for (std::size_t k = 0; k < r1.output.size(); ++k) {
    CHECK(r1.output.data()[k] >= 0.0);
    CHECK(r1.output.data()[k] <= 1.0);
    CHECK(r1.output.data()[k] == r2.output.data()[k]);
  }
  for (int c = 0; c < 3; ++c) CHECK(r1.airlight[c] == r2.airlight[c]);
}

TEST_CASE("detail gain amplifies residuals without moving the base") {
  const Airlight a{{0.92, 0.94, 0.97}};
  HazeScene scene = make_layered_scene(64, 64, 3, 1.0, a, 11);
  const Image hazy = synthesize(scene);
  PipelineConfig boosted;
  boosted.detail_gain = {1.5};
  DehazeOptions opt;
  opt.airlight = a;
  const DehazeResult plain = dehaze(hazy, {}, opt);
  const DehazeResult sharp = dehaze(hazy, boosted, opt);
  CHECK(oracle::max_abs_diff(plain.output, sharp.output) > 0.0);
  // Transmission stages are untouched by the gain.
  CHECK(oracle::max_abs_diff(plain.refined.map, sharp.refined.map) == 0.0);
}

TEST_CASE("dehaze rejects undersized or grayscale inputs") {
  CHECK_THROWS_AS(dehaze(Image(8, 8, 1, 0.5)), std::invalid_argument);
  PipelineConfig deep;
  deep.levels = 3;
  CHECK_THROWS_AS(dehaze(Image(6, 6, 3, 0.5), deep), std::invalid_argument);
}

TEST_CASE("single-scale option routes through the baseline") {
  const Airlight a{{0.92, 0.94, 0.97}};
  HazeScene scene = make_layered_scene(48, 48, 2, 1.0, a, 3);
  const Image hazy = synthesize(scene);
  DehazeOptions opt;
  opt.airlight = a;
  opt.single_scale = true;
  const DehazeResult res = dehaze(hazy, {}, opt);
  CHECK(res.transmission_levels.empty());
  const Image direct = restore_single_scale(hazy, res.refined.map, a, 0.1);
  CHECK(oracle::max_abs_diff(res.output, direct) == 0.0);
}
