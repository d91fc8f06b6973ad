#pragma once

#include <optional>
#include <utility>

#include "msdehaze/airlight.hpp"
#include "msdehaze/config.hpp"
#include "msdehaze/image.hpp"
#include "msdehaze/pyramid.hpp"
#include "msdehaze/restore.hpp"
#include "msdehaze/timing.hpp"
#include "msdehaze/transmission.hpp"

namespace msdehaze {

struct DehazeOptions {
  std::optional<Airlight> airlight;  // skip estimation when the light is known
  bool single_scale = false;         // Koschmieder baseline instead of the pyramid path
};

struct DehazeResult {
  Image output;
  Airlight airlight;
  TransmissionMap initial;
  TransmissionMap averaged;
  TransmissionMap refined;
  std::vector<Image> transmission_levels;
  ImagePyramid pyramid;  // of the hazy input
  Image smoothed;        // {Z}_E^0, the estimation input
  std::vector<StageTiming> timings;
};

// Full restoration pipeline. Estimation (airlight, transmission) runs on the
// once-smoothed image expand(reduce(Z)); restoration runs level by level on
// the pyramid of Z itself and collapses with a single final clamp.
inline DehazeResult dehaze(const Image& hazy, const PipelineConfig& cfg = {},
                           const DehazeOptions& opt = {}) {
  validate(cfg);
  if (hazy.channels() != 3)
    throw std::invalid_argument("dehaze: 3-channel image required");
  if (std::min(hazy.width(), hazy.height()) < std::max(2, 1 << cfg.levels))
    throw std::invalid_argument("dehaze: image too small for the pyramid depth");
  set_worker_count(cfg.threads);

  DehazeResult res;
  StageClock clock;
  const auto mark = [&](const char* stage) {
    res.timings.push_back({stage, clock.elapsed_ms()});
    clock.restart();
  };

  res.pyramid = build_pyramid(hazy, cfg.levels);
  res.smoothed = expand(res.pyramid.gaussian[1], hazy.height(), hazy.width());
  mark("pyramid");

  res.airlight = opt.airlight ? *opt.airlight : estimate_airlight(res.smoothed);
  mark("airlight");

  res.initial = initial_transmission(res.smoothed, res.airlight, cfg.rho_dark);
  mark("initial_transmission");

  const HazeLineClusters clusters = cluster_haze_lines(
      res.smoothed, res.airlight, cfg.bin_step, cfg.nu, cfg.min_radius);
  res.averaged = haze_line_average(res.initial, clusters);
  mark("haze_line_average");

  const Image guide = guidance(res.smoothed, res.airlight);
  res.refined = wgif_refine(res.averaged, guide, cfg.rho_wgif, cfg.lambda);
  mark("wgif_refine");

  if (opt.single_scale) {
    res.output = restore_single_scale(hazy, res.refined.map, res.airlight, cfg.t_floor);
    mark("restore_single_scale");
    return res;
  }

  res.transmission_levels = transmission_pyramid(res.refined, cfg.levels);
  mark("transmission_pyramid");

  Image acc = restore_base(res.pyramid.gaussian[cfg.levels],
                           res.transmission_levels[cfg.levels], res.airlight,
                           cfg.eta);
  for (int l = cfg.levels - 1; l >= 0; --l) {
    const Image& residual = res.pyramid.laplacian[l];
    acc = expand(acc, residual.height(), residual.width());
    const Image restored = restore_laplacian(
        residual, res.transmission_levels[l], l, cfg.eta);
    const double gain =
        cfg.detail_gain[std::min<std::size_t>(l, cfg.detail_gain.size() - 1)];
    for (std::size_t k = 0; k < acc.size(); ++k)
      acc.data()[k] += gain * restored.data()[k];
  }
  res.output = clamped01(std::move(acc));
  mark("restore_collapse");
  return res;
}

}  // namespace msdehaze
