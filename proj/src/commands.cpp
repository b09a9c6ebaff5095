#include "fsp/commands.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fsp/image.hpp"
#include "fsp/svg.hpp"
#include "fsp/synth.hpp"

namespace fsp {

namespace {

class StageTimer
{
public:
  StageTimer(std::ostream& log, bool enabled) : log_{log}, enabled_{enabled} {}

  void lap(const char* stage)
  {
    const auto now = Clock::now();
    if (enabled_)
      log_ << "timing: " << stage << ' ' << std::fixed << std::setprecision(3)
           << std::chrono::duration<double, std::milli>(now - last_).count() << " ms\n"
           << std::defaultfloat;
    last_ = now;
  }

private:
  using Clock = std::chrono::steady_clock;
  std::ostream& log_;
  bool enabled_;
  Clock::time_point last_ = Clock::now();
};

Resolution parse_size(const std::string& text)
{
  int w = 0;
  int h = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%dx%d%c", &w, &h, &tail) == 2 && w > 0 && h > 0)
    return {w, h};
  if (std::sscanf(text.c_str(), "%d%c", &w, &tail) == 1 && w > 0)
    return {w, w};
  throw InputError{"--size expects N or WxH, got '" + text + "'"};
}

using RecordKey = std::pair<int, int>;  // frame, person

std::map<RecordKey, const KeypointRecord*> index_records(const std::vector<KeypointRecord>& records,
                                                         const char* which)
{
  std::map<RecordKey, const KeypointRecord*> out;
  for (const KeypointRecord& r : records)
    if (!out.emplace(RecordKey{r.skeleton.frame_index, r.skeleton.person_id}, &r).second)
      throw InputError{std::string{which} + " has two records for frame " +
                       std::to_string(r.skeleton.frame_index) + ", person " +
                       std::to_string(r.skeleton.person_id)};
  return out;
}

} // namespace

std::vector<Skeleton3D> reconstruct_sequence(const Calibration& calib,
                                             const std::vector<KeypointRecord>& a,
                                             const std::vector<KeypointRecord>& b,
                                             double min_conf, double max_residual)
{
  const auto by_key_a = index_records(a, "first keypoint file");
  const auto by_key_b = index_records(b, "second keypoint file");

  struct Job
  {
    RecordKey key;
    std::vector<JointCorrespondence> corrs;
    ProjectionMatrix p_a;
    ProjectionMatrix p_b;
  };
  std::vector<Job> jobs;
  for (const auto& [key, ra] : by_key_a)
  {
    const auto it = by_key_b.find(key);
    if (it == by_key_b.end())
      continue;
    const KeypointRecord& rb = *it->second;
    const CameraCalibration& cam_a = calib.camera(ra->camera_id);
    const CameraCalibration& cam_b = calib.camera(rb.camera_id);
    jobs.push_back({key, match_joints(ra->skeleton, rb.skeleton, min_conf),
                    projection_matrix(ra->view, cam_a.world_pose),
                    projection_matrix(rb.view, cam_b.world_pose)});
  }

  std::vector<Skeleton3D> out(jobs.size());
  detail::parallel_rows(static_cast<int>(jobs.size()), [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
    {
      const Job& job = jobs[i];
      out[i] = reconstruct_skeleton(job.corrs, job.p_a, job.p_b, max_residual);
      out[i].frame_index = job.key.first;
      out[i].person_id = job.key.second;
    }
  });
  return out;
}

std::string stats_table(const std::vector<PersonStats>& stats, const BodyModel& model)
{
  std::ostringstream t;
  t << std::left << std::setw(8) << "person" << std::setw(22) << "limb" << std::right
    << std::setw(7) << "n" << std::setw(7) << "freq";
  for (const char* h : {"mean", "stddev", "min", "q1", "median", "q3", "max"})
    t << std::setw(9) << h;
  t << '\n';
  t << std::fixed;
  for (const PersonStats& p : stats)
    for (int l = 0; l < kLimbCount; ++l)
    {
      const LimbSummary& s = p.limbs[l];
      t << std::left << std::setw(8) << p.person_id << std::setw(22) << model.limb_name(l)
        << std::right << std::setw(7) << s.count << std::setw(7) << std::setprecision(3)
        << p.frequency[l] << std::setprecision(4);
      for (double v : {s.mean, s.stddev, s.min, s.q1, s.median, s.q3, s.max})
      {
        if (s.count == 0)
          t << std::setw(9) << "-";
        else
          t << std::setw(9) << v;
      }
      t << '\n';
    }
  return t.str();
}

void cmd_remap(const RemapOptions& opts, std::ostream& log)
{
  StageTimer timer{log, opts.timings};
  const Calibration calib = read_calibration(opts.calib);
  const CameraCalibration& cam = calib.camera(opts.camera);
  const Image source = read_image(opts.image);
  if (source.resolution() != cam.intrinsics.resolution())
    throw SizeMismatch{"image is " + std::to_string(source.width()) + "x" +
                       std::to_string(source.height()) + " but camera '" + cam.id + "' is " +
                       std::to_string(cam.intrinsics.width()) + "x" +
                       std::to_string(cam.intrinsics.height())};
  timer.lap("load");

  constexpr double deg = std::numbers::pi / 180.0;
  if (!(opts.fov > 0 && opts.fov < 180))
    throw DomainError{"--fov must lie in (0, 180) degrees"};
  View view = View::from_fov(cam.id, Eigen::Matrix3d::Identity(), opts.fov * deg, opts.size);
  if (opts.target)
    view = focus_view(view, *opts.target, cam.intrinsics, std::optional{cam.camera_gravity()});
  else
    view = view.with_rotation(
        rotation_from_yaw_pitch_roll(opts.yaw * deg, opts.pitch * deg, opts.roll * deg));
  const Map map = build_lookup_map(view, cam.intrinsics);
  timer.lap("view generation");

  const Image out = remap(source, map, opts.fill, opts.interpolation);
  timer.lap("remap");
  if (map.valid_count() == 0)
    log << "warning: the view lies outside the field of view of camera '" << cam.id
        << "'; output is entirely fill\n";

  write_image(opts.out, out);
  if (opts.map_out)
    write_lookup_map(*opts.map_out, map);
  timer.lap("write");
}

void cmd_reconstruct(const ReconstructOptions& opts, std::ostream& log)
{
  StageTimer timer{log, opts.timings};
  if (!(opts.min_conf >= 0 && opts.min_conf <= 1))
    throw InputError{"--min-conf must lie in [0, 1]"};
  if (!(opts.max_residual >= 0))
    throw InputError{"--max-residual must be non-negative"};
  const Calibration calib = read_calibration(opts.calib);
  const auto a = read_keypoints(opts.kp_a);
  const auto b = read_keypoints(opts.kp_b);
  timer.lap("load");
  const auto skeletons = reconstruct_sequence(calib, a, b, opts.min_conf, opts.max_residual);
  timer.lap("reconstruction");
  write_json(opts.out, skeletons_to_json(skeletons));
  timer.lap("write");
}

void cmd_stats(const StatsOptions& opts, std::ostream& out)
{
  const auto skeletons = read_skeletons(opts.in);
  const auto stats = accumulate_stats(skeletons);
  out << stats_table(stats);
  if (opts.out)
    write_json(*opts.out, stats_to_json(stats));
  if (opts.svg)
    write_text(*opts.svg, limb_box_plot_svg(stats));
}

void cmd_synth(const SynthOptions& opts)
{
  const SceneConfig scene = opts.config ? scene_from_json(read_json(*opts.config)) : SceneConfig{};
  write_synthetic(opts.out_dir, synthesize(scene, opts.seed));
}

void cmd_curves(const CurvesOptions& opts)
{
  if (opts.samples < 2)
    throw InputError{"--samples must be at least 2"};
  write_text(opts.out, lens_curves_svg(sample_lens_curves(opts.samples)));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Fisheye stereo toolkit: virtual views, triangulation and limb statistics", "fsp"};
  app.require_subcommand(1);

  RemapOptions remap_opts;
  std::string size_text = "640";
  std::string interp_text = "bilinear";
  int fill = 0;
  double target_x = 0;
  double target_y = 0;
  std::string map_out;
  auto* remap_cmd = app.add_subcommand("remap", "Render a rectilinear view from a fisheye image");
  remap_cmd->add_option("--calib", remap_opts.calib, "Calibration JSON")->required();
  remap_cmd->add_option("--camera", remap_opts.camera, "Camera id in the calibration")->required();
  remap_cmd->add_option("--image", remap_opts.image, "Fisheye image (PNG or PNM)")->required();
  auto* yaw = remap_cmd->add_option("--yaw", remap_opts.yaw, "Pan about the camera y axis, degrees");
  auto* pitch = remap_cmd->add_option("--pitch", remap_opts.pitch, "Tilt about the camera x axis, degrees");
  auto* roll = remap_cmd->add_option("--roll", remap_opts.roll, "Roll about the view axis, degrees");
  auto* tx = remap_cmd->add_option("--target-x", target_x, "Fisheye pixel to center the view on");
  auto* ty = remap_cmd->add_option("--target-y", target_y, "Fisheye pixel to center the view on");
  tx->needs(ty);
  ty->needs(tx);
  for (auto* angle : {yaw, pitch, roll})
  {
    angle->excludes(tx);
    angle->excludes(ty);
  }
  remap_cmd->add_option("--fov", remap_opts.fov, "Horizontal field of view, degrees")
      ->capture_default_str();
  remap_cmd->add_option("--size", size_text, "Output size: N or WxH")->capture_default_str();
  remap_cmd->add_option("--interp", interp_text, "Interpolation")
      ->check(CLI::IsMember({"bilinear", "nearest"}))
      ->capture_default_str();
  remap_cmd->add_option("--fill", fill, "Value for pixels outside the fisheye image")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  remap_cmd->add_option("--map-out", map_out, "Also write the lookup map (FLKM binary)");
  remap_cmd->add_option("--out", remap_opts.out, "Output image (.png, .pgm or .ppm)")->required();
  remap_cmd->add_flag("--timings", remap_opts.timings, "Report per-stage wall clock");

  ReconstructOptions rec_opts;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Triangulate 3D skeletons from two keypoint files");
  rec_cmd->add_option("--calib", rec_opts.calib, "Calibration JSON")->required();
  rec_cmd->add_option("--kp-a", rec_opts.kp_a, "Keypoints of the first camera")->required();
  rec_cmd->add_option("--kp-b", rec_opts.kp_b, "Keypoints of the second camera")->required();
  rec_cmd->add_option("--min-conf", rec_opts.min_conf, "Minimum joint confidence in both views")
      ->capture_default_str();
  rec_cmd->add_option("--max-residual", rec_opts.max_residual, "Maximum reprojection residual, px")
      ->capture_default_str();
  rec_cmd->add_option("--out", rec_opts.out, "Output skeleton JSON")->required();
  rec_cmd->add_flag("--timings", rec_opts.timings, "Report per-stage wall clock");

  StatsOptions stats_opts;
  std::string stats_out;
  std::string stats_svg;
  auto* stats_cmd = app.add_subcommand("stats", "Limb length statistics and reconstruction frequencies");
  stats_cmd->add_option("--in", stats_opts.in, "Skeleton JSON")->required();
  stats_cmd->add_option("--out", stats_out, "Statistics JSON");
  stats_cmd->add_option("--svg", stats_svg, "Box plot SVG");

  SynthOptions synth_opts;
  std::string config;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic two-camera scene with ground truth");
  synth_cmd->add_option("--config", config, "Scene JSON; defaults apply when omitted");
  synth_cmd->add_option("--seed", synth_opts.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_opts.out_dir, "Output directory")->required();

  CurvesOptions curves_opts;
  auto* curves_cmd = app.add_subcommand("curves", "Plot r_d/f against inclination for every lens model");
  curves_cmd->add_option("--out", curves_opts.out, "Output SVG")->required();
  curves_cmd->add_option("--samples", curves_opts.samples, "Samples per curve")->capture_default_str();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try
  {
    if (remap_cmd->parsed())
    {
      remap_opts.size = parse_size(size_text);
      remap_opts.interpolation = interp_text == "nearest" ? Interpolation::Nearest : Interpolation::Bilinear;
      remap_opts.fill = static_cast<std::uint8_t>(fill);
      if (!tx->empty())
        remap_opts.target = Eigen::Vector2d{target_x, target_y};
      if (!map_out.empty())
        remap_opts.map_out = map_out;
      cmd_remap(remap_opts, err);
    }
    else if (rec_cmd->parsed())
      cmd_reconstruct(rec_opts, err);
    else if (stats_cmd->parsed())
    {
      if (!stats_out.empty())
        stats_opts.out = stats_out;
      if (!stats_svg.empty())
        stats_opts.svg = stats_svg;
      cmd_stats(stats_opts, out);
    }
    else if (synth_cmd->parsed())
    {
      if (!config.empty())
        synth_opts.config = config;
      cmd_synth(synth_opts);
    }
    else if (curves_cmd->parsed())
      cmd_curves(curves_opts);
  }
  catch (const GeometryError& e)
  {
    err << "error: " << e.what() << '\n';
    return kExitGeometry;
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

} // namespace fsp
