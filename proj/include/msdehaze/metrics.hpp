#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "msdehaze/image.hpp"
#include "msdehaze/timing.hpp"

namespace msdehaze {

inline constexpr double kPsnrCap = 99.0;  // reported when images are identical

struct MetricsReport {
  double psnr_db = 0.0;
  double mae = 0.0;
  std::optional<double> transmission_mae;  // over non-sky pixels when a mask is given
  std::optional<double> sky_noise_gain;    // std(restored - reference)/noise_std in the mask
  std::vector<StageTiming> timings;
};

struct MetricsInputs {
  const Image* clean = nullptr;
  const Image* restored = nullptr;
  const Image* t_true = nullptr;
  const Image* t_est = nullptr;
  const Image* sky_mask = nullptr;            // values > 0.5 mark sky
  const Image* reference_restored = nullptr;  // noise-free run under the same config/seed
  double noise_std = 0.0;
};

inline MetricsReport evaluate(const MetricsInputs& in) {
  StageClock clock;
  if (!in.clean || !in.restored)
    throw std::invalid_argument("evaluate: clean and restored images required");
  const Image& clean = *in.clean;
  const Image& restored = *in.restored;
  if (!clean.same_shape(restored))
    throw std::invalid_argument("evaluate: clean/restored shape mismatch");

  MetricsReport report;
  double se = 0.0, ae = 0.0;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    const double d = restored.data()[k] - clean.data()[k];
    se += d * d;
    ae += std::fabs(d);
  }
  const double mse = se / static_cast<double>(clean.size());
  report.mae = ae / static_cast<double>(clean.size());
  report.psnr_db = mse > 0.0 ? std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse)) : kPsnrCap;

  if (in.t_true && in.t_est) {
    if (!in.t_true->same_size(*in.t_est) || !in.t_true->same_size(clean))
      throw std::invalid_argument("evaluate: transmission map size mismatch");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < in.t_true->plane_size(); ++k) {
      if (in.sky_mask && in.sky_mask->data()[k] > 0.5) continue;
      sum += std::fabs(in.t_true->data()[k] - in.t_est->data()[k]);
      ++count;
    }
    if (count == 0)
      throw std::invalid_argument("evaluate: no valid pixels for transmission MAE");
    report.transmission_mae = sum / static_cast<double>(count);
  }

  if (in.reference_restored) {
    if (!in.sky_mask)
      throw std::invalid_argument("evaluate: sky mask required for the noise gain");
    if (!(in.noise_std > 0.0))
      throw std::invalid_argument("evaluate: positive noise_std required for the noise gain");
    if (!in.reference_restored->same_shape(restored) ||
        !in.sky_mask->same_size(restored))
      throw std::invalid_argument("evaluate: noise-gain input size mismatch");
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < restored.channels(); ++c) {
      const double* rp = restored.plane(c);
      const double* fp = in.reference_restored->plane(c);
      for (std::size_t k = 0; k < restored.plane_size(); ++k) {
        if (in.sky_mask->data()[k] <= 0.5) continue;
        const double d = rp[k] - fp[k];
        sum += d;
        sum2 += d * d;
        ++count;
      }
    }
    if (count == 0) throw std::invalid_argument("evaluate: sky mask is empty");
    const double mean = sum / static_cast<double>(count);
    const double var = std::max(0.0, sum2 / static_cast<double>(count) - mean * mean);
    report.sky_noise_gain = std::sqrt(var) / in.noise_std;
  }

  report.timings.push_back({"evaluate", clock.elapsed_ms()});
  return report;
}

}  // namespace msdehaze
