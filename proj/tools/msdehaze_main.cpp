// Command-line front end: dehaze | synth | eval | inspect.
// Exit codes: 0 success, 1 usage/config error, 2 runtime error.
// Stage timings go to stderr; files on disk are fully deterministic.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msdehaze/msdehaze.hpp"

namespace fs = std::filesystem;
using namespace msdehaze;

namespace {

Airlight parse_airlight(const std::string& text) {
  const std::vector<double> v = parse_gain_list(text);
  if (v.size() != 3)
    throw std::invalid_argument("airlight: expected three comma-separated values");
  for (double c : v)
    if (!(c > 0.0) || c > 1.0)
      throw std::invalid_argument("airlight: channels must be in (0, 1]");
  return Airlight{{v[0], v[1], v[2]}};
}

void print_timings(const std::vector<StageTiming>& timings) {
  for (const auto& t : timings)
    std::fprintf(stderr, "[timing] %-22s %9.3f ms\n", t.stage.c_str(), t.millis);
}

// Flag values land in optionals so a config file can be merged first and
// explicit flags still win.
struct PipelineFlags {
  std::string config_path;
  std::optional<int> rho_dark, rho_wgif, nu, levels, threads;
  std::optional<double> lambda, bin_step, eta, min_radius, t_floor;
  std::optional<std::string> detail_gain;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "key=value config file, merged before flags");
    cmd.add_option("--rho-dark", rho_dark, "dark channel window radius");
    cmd.add_option("--rho-wgif", rho_wgif, "guided filter radius");
    cmd.add_option("--lambda", lambda, "guided filter regularizer");
    cmd.add_option("--bin-step", bin_step, "haze-line histogram bin (radians)");
    cmd.add_option("--nu", nu, "haze-line subset cap");
    cmd.add_option("--eta", eta, "restoration transmission floor");
    cmd.add_option("--levels", levels, "pyramid depth L0 (1..3)");
    cmd.add_option("--min-radius", min_radius, "near-airlight clustering bypass radius");
    cmd.add_option("--tl", t_floor, "single-scale lower bound t_L");
    cmd.add_option("--detail-gain", detail_gain, "comma list of per-level Laplacian gains");
    cmd.add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (rho_dark) cfg.rho_dark = *rho_dark;
    if (rho_wgif) cfg.rho_wgif = *rho_wgif;
    if (lambda) cfg.lambda = *lambda;
    if (bin_step) cfg.bin_step = *bin_step;
    if (nu) cfg.nu = *nu;
    if (eta) cfg.eta = *eta;
    if (levels) cfg.levels = *levels;
    if (min_radius) cfg.min_radius = *min_radius;
    if (t_floor) cfg.t_floor = *t_floor;
    if (detail_gain) cfg.detail_gain = parse_gain_list(*detail_gain);
    if (threads) cfg.threads = *threads;
    validate(cfg);
    return cfg;
  }
};

const Image& stage_map(const DehazeResult& res, const std::string& stage) {
  if (stage == "initial") return res.initial.map;
  if (stage == "averaged") return res.averaged.map;
  if (stage == "refined") return res.refined.map;
  throw std::invalid_argument("save-stage: expected initial|averaged|refined");
}

int run_dehaze(const std::string& input, const std::string& output,
               const PipelineFlags& flags, const std::string& airlight_text,
               bool single_scale, const std::string& save_transmission,
               const std::string& save_stage) {
  const PipelineConfig cfg = flags.resolve();
  DehazeOptions opt;
  if (!airlight_text.empty()) opt.airlight = parse_airlight(airlight_text);
  opt.single_scale = single_scale;
  const Image hazy = load_image(input);
  const DehazeResult res = dehaze(hazy, cfg, opt);
  save_image(res.output, output);
  if (!save_transmission.empty())
    save_image(stage_map(res, save_stage), save_transmission);
  print_timings(res.timings);
  return 0;
}

int run_inspect(const std::string& input, const std::string& outdir,
                const PipelineFlags& flags, const std::string& airlight_text) {
  const PipelineConfig cfg = flags.resolve();
  DehazeOptions opt;
  if (!airlight_text.empty()) opt.airlight = parse_airlight(airlight_text);
  const Image hazy = load_image(input);
  const DehazeResult res = dehaze(hazy, cfg, opt);

  fs::create_directories(outdir);
  const auto path = [&](const std::string& name) { return (fs::path(outdir) / name).string(); };
  for (std::size_t l = 0; l < res.pyramid.gaussian.size(); ++l)
    save_image(res.pyramid.gaussian[l], path("gaussian_" + std::to_string(l) + ".ppm"));
  for (std::size_t l = 0; l < res.pyramid.laplacian.size(); ++l) {
    Image vis = res.pyramid.laplacian[l];
    for (std::size_t k = 0; k < vis.size(); ++k) vis.data()[k] += 0.5;  // display offset
    save_image(vis, path("laplacian_" + std::to_string(l) + ".ppm"));
  }
  save_image(res.smoothed, path("smoothed.ppm"));
  save_image(res.initial.map, path("transmission_initial.pgm"));
  save_image(res.averaged.map, path("transmission_averaged.pgm"));
  save_image(res.refined.map, path("transmission_refined.pgm"));
  for (std::size_t l = 0; l < res.transmission_levels.size(); ++l)
    save_image(res.transmission_levels[l], path("transmission_level_" + std::to_string(l) + ".pgm"));
  save_image(res.output, path("output.ppm"));
  {
    std::ofstream out(path("airlight.txt"), std::ios::trunc);
    out << detail::format_double(res.airlight[0]) << ' '
        << detail::format_double(res.airlight[1]) << ' '
        << detail::format_double(res.airlight[2]) << '\n';
  }
  {
    std::ofstream out(path("config.cfg"), std::ios::trunc);
    out << serialize_config(cfg);
  }
  print_timings(res.timings);
  return 0;
}

int run_synth(const std::string& out_path, const std::string& truth_path,
              const std::string& tmap_path, const std::string& mask_path,
              int width, int height, int layers, double alpha,
              const std::string& airlight_text, double noise, std::uint64_t seed,
              std::optional<double> t_const) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("synth: width and height must be >= 2");
  if (noise < 0.0) throw std::invalid_argument("synth: noise must be >= 0");
  const Airlight a = parse_airlight(airlight_text);
  HazeScene scene = make_layered_scene(width, height, layers, alpha, a, seed);
  if (t_const) {
    if (!(*t_const > 0.0) || *t_const > 1.0)
      throw std::invalid_argument("synth: t-const must be in (0, 1]");
    const double depth = -std::log(*t_const) / alpha;
    std::fill(scene.depth.begin(), scene.depth.end(), depth);
  }
  scene.noise_std = noise;

  save_image(synthesize(scene), out_path);
  if (!truth_path.empty()) save_image(scene.clean, truth_path);
  if (!tmap_path.empty()) save_image(transmission_of(scene), tmap_path);
  if (!mask_path.empty()) save_image(sky_mask_of(scene), mask_path);
  return 0;
}

int run_eval(const std::string& clean_path, const std::string& restored_path,
             const std::string& t_true_path, const std::string& t_est_path,
             const std::string& mask_path, const std::string& ref_path,
             double noise_std, const std::string& json_path) {
  const Image clean = load_image(clean_path);
  const Image restored = load_image(restored_path);
  std::optional<Image> t_true, t_est, mask, ref;
  if (!t_true_path.empty()) t_true = load_image(t_true_path);
  if (!t_est_path.empty()) t_est = load_image(t_est_path);
  if (!mask_path.empty()) mask = load_image(mask_path);
  if (!ref_path.empty()) ref = load_image(ref_path);

  MetricsInputs in;
  in.clean = &clean;
  in.restored = &restored;
  if (t_true) in.t_true = &*t_true;
  if (t_est) in.t_est = &*t_est;
  if (mask) in.sky_mask = &*mask;
  if (ref) in.reference_restored = &*ref;
  in.noise_std = noise_std;
  const MetricsReport report = evaluate(in);

  nlohmann::json j;
  j["psnr_db"] = report.psnr_db;
  j["mae"] = report.mae;
  j["transmission_mae"] =
      report.transmission_mae ? nlohmann::json(*report.transmission_mae) : nlohmann::json();
  j["sky_noise_gain"] =
      report.sky_noise_gain ? nlohmann::json(*report.sky_noise_gain) : nlohmann::json();
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw IoError(IoStatus::kUnwritable, json_path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  print_timings(report.timings);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-scale single image dehazing"};
  app.require_subcommand(1);

  // dehaze
  auto* dehaze_cmd = app.add_subcommand("dehaze", "restore a haze-free image");
  std::string in_path, out_path, airlight_text, save_transmission, save_stage = "refined";
  bool single_scale = false;
  PipelineFlags dehaze_flags;
  dehaze_cmd->add_option("--input", in_path, "hazy input (PPM)")->required();
  dehaze_cmd->add_option("--output", out_path, "restored output (PPM)")->required();
  dehaze_cmd->add_option("--airlight", airlight_text, "override estimation with r,g,b");
  dehaze_cmd->add_flag("--single-scale", single_scale, "Koschmieder baseline restoration");
  dehaze_cmd->add_option("--save-transmission", save_transmission, "dump a transmission stage (PGM)");
  dehaze_cmd->add_option("--save-stage", save_stage, "initial|averaged|refined");
  dehaze_flags.attach(*dehaze_cmd);

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "dump every pipeline stage to a directory");
  std::string inspect_in, inspect_dir, inspect_airlight;
  PipelineFlags inspect_flags;
  inspect_cmd->add_option("--input", inspect_in, "hazy input (PPM)")->required();
  inspect_cmd->add_option("--outdir", inspect_dir, "output directory")->required();
  inspect_cmd->add_option("--airlight", inspect_airlight, "override estimation with r,g,b");
  inspect_flags.attach(*inspect_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic hazy scene");
  std::string synth_out, synth_truth, synth_tmap, synth_mask;
  std::string synth_airlight = "0.92,0.94,0.97";
  int synth_w = 256, synth_h = 256, synth_layers = 4;
  double synth_alpha = 1.0, synth_noise = 0.0;
  std::uint64_t synth_seed = 1;
  std::optional<double> synth_tconst;
  synth_cmd->add_option("--out", synth_out, "hazy image (PPM)")->required();
  synth_cmd->add_option("--truth", synth_truth, "haze-free ground truth (PPM)");
  synth_cmd->add_option("--tmap", synth_tmap, "true transmission map (PGM)");
  synth_cmd->add_option("--sky-mask", synth_mask, "sky mask, t < 0.02 (PGM)");
  synth_cmd->add_option("--width", synth_w, "scene width");
  synth_cmd->add_option("--height", synth_h, "scene height");
  synth_cmd->add_option("--layers", synth_layers, "depth band count (>= 2)");
  synth_cmd->add_option("--alpha", synth_alpha, "scattering coefficient");
  synth_cmd->add_option("--airlight", synth_airlight, "atmospheric light r,g,b");
  synth_cmd->add_option("--noise", synth_noise, "Gaussian noise std");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");
  synth_cmd->add_option("--t-const", synth_tconst, "constant transmission instead of bands");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "full-reference metrics to JSON");
  std::string eval_clean, eval_restored, eval_ttrue, eval_test, eval_mask, eval_ref, eval_json;
  double eval_noise = 0.0;
  eval_cmd->add_option("--clean", eval_clean, "ground truth (PPM)")->required();
  eval_cmd->add_option("--restored", eval_restored, "restored image (PPM)")->required();
  eval_cmd->add_option("--tmap-true", eval_ttrue, "true transmission (PGM)");
  eval_cmd->add_option("--tmap-est", eval_test, "estimated transmission (PGM)");
  eval_cmd->add_option("--mask", eval_mask, "sky mask (PGM)");
  eval_cmd->add_option("--ref-restored", eval_ref, "noise-free-run restoration (PPM)");
  eval_cmd->add_option("--noise-std", eval_noise, "noise std used at synthesis");
  eval_cmd->add_option("--json", eval_json, "report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: usage: " << e.what() << '\n';
    return 1;
  }

  try {
    if (dehaze_cmd->parsed())
      return run_dehaze(in_path, out_path, dehaze_flags, airlight_text,
                        single_scale, save_transmission, save_stage);
    if (inspect_cmd->parsed())
      return run_inspect(inspect_in, inspect_dir, inspect_flags, inspect_airlight);
    if (synth_cmd->parsed())
      return run_synth(synth_out, synth_truth, synth_tmap, synth_mask, synth_w,
                       synth_h, synth_layers, synth_alpha, synth_airlight,
                       synth_noise, synth_seed, synth_tconst);
    if (eval_cmd->parsed())
      return run_eval(eval_clean, eval_restored, eval_ttrue, eval_test,
                      eval_mask, eval_ref, eval_noise, eval_json);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
