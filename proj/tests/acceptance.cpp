// Acceptance suite. Prints one PASS/FAIL line per check and exits non-zero if
// any check fails. Artifacts (plots, synthetic cases) land in the working
// directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <thread>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "fsp/commands.hpp"
#include "fsp/svg.hpp"
#include "fsp/synth.hpp"
#include "fsp/triangulation.hpp"
#include "fsp/view_synthesis.hpp"

using namespace fsp;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome
{
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng)
{
  std::normal_distribution<double> n{0.0, 1.0};
  return Eigen::Quaterniond{n(rng), n(rng), n(rng), n(rng)}.normalized().toRotationMatrix();
}

Eigen::Matrix3d random_small_rotation(std::mt19937_64& rng, double max_angle)
{
  std::normal_distribution<double> n{0.0, 1.0};
  std::uniform_real_distribution<double> u{0.0, max_angle};
  return Eigen::AngleAxisd{u(rng), Eigen::Vector3d{n(rng), n(rng), n(rng)}.normalized()}
      .toRotationMatrix();
}

// Closed forms written out independently of the library.
double closed_form_rd(LensKind kind, double theta)
{
  switch (kind)
  {
  case LensKind::Rectilinear: return std::tan(theta);
  case LensKind::Equidistant: return theta;
  case LensKind::Stereographic: return 2 * std::tan(theta / 2);
  case LensKind::Equisolid: return 2 * std::sin(theta / 2);
  case LensKind::Orthographic: return std::sin(theta);
  }
  return NAN;
}

// 1. Lens round trips.
Outcome lens_round_trips()
{
  // Within about 4e-4 rad of pi (equisolid) and pi/2 (orthographic) the
  // forward map flattens out and a double-precision r_d no longer determines
  // theta to 1e-12, so the check samples [0, theta_max - 1e-3].
  constexpr double margin = 1e-3;
  std::mt19937_64 rng{1};
  double worst = 0;
  double worst_full = 0;
  const auto t0 = Clock::now();
  for (LensKind kind : kAllLensKinds)
  {
    const Lens lens{kind, 1.0};
    std::uniform_real_distribution<double> u{0.0, lens.theta_max() - margin};
    for (int k = 0; k < 10000; ++k)
    {
      const double theta = u(rng);
      worst = std::max(worst, std::abs(lens.rd_to_theta(lens.theta_to_rd(theta)) - theta));
    }
  }
  const double elapsed = ms_since(t0);

  std::mt19937_64 full_rng{1};
  for (LensKind kind : kAllLensKinds)
  {
    const Lens lens{kind, 1.0};
    std::uniform_real_distribution<double> u{0.0, lens.theta_max()};
    for (int k = 0; k < 10000; ++k)
    {
      const double theta = u(full_rng);
      if (lens.theta_in_domain(theta))
        worst_full = std::max(worst_full, std::abs(lens.rd_to_theta(lens.theta_to_rd(theta)) - theta));
    }
  }
  std::cout << "info: round trip over the full domain, worst " << sci(worst_full) << " rad\n";
  return {worst <= 1e-12 && elapsed < 1000,
          "worst " + sci(worst) + " rad, " + sci(elapsed) + " ms for 5 x 1e4 samples"};
}

// 2. r_d/f curves: closed-form agreement, strict monotonicity, plot.
Outcome lens_curves()
{
  const auto curves = sample_lens_curves(20000, std::numeric_limits<double>::infinity());
  double worst = 0;
  bool monotone = true;
  std::size_t samples = 0;
  for (const LensCurve& c : curves)
  {
    for (std::size_t k = 0; k < c.theta.size(); ++k)
    {
      const double expected = closed_form_rd(c.kind, c.theta[k]);
      worst = std::max(worst, std::abs(c.rd_over_f[k] - expected) / std::max(1.0, std::abs(expected)));
      if (k > 0 && !(c.rd_over_f[k] > c.rd_over_f[k - 1]))
        monotone = false;
    }
    samples += c.theta.size();
  }
  write_text("lens_curves.svg", lens_curves_svg(sample_lens_curves(721)));
  return {worst <= 1e-12 && monotone && curves.size() == 5,
          std::to_string(samples) + " samples, worst deviation " + sci(worst) +
              (monotone ? ", strictly increasing" : ", NOT monotone") + ", plot lens_curves.svg"};
}

// 3. unproject(project(o)) recovers the ray.
Outcome projection_round_trips()
{
  std::mt19937_64 rng{3};
  double worst = 0;
  for (LensKind kind : kAllLensKinds)
  {
    const Intrinsics cam{Lens{kind, 320}, {511.5, 511.5}, {1024, 1024}};
    std::uniform_real_distribution<double> theta{0.0, cam.lens().theta_max()};
    std::uniform_real_distribution<double> phi{-kPi, kPi};
    std::uniform_real_distribution<double> range{0.05, 20.0};
    for (int k = 0; k < 10000; ++k)
    {
      const double t = theta(rng);
      if (!cam.lens().theta_in_domain(t))
        continue;
      const double p = phi(rng);
      const Eigen::Vector3d o =
          range(rng) * Eigen::Vector3d{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
      worst = std::max(worst, (unproject(project(o, cam), cam) - o.normalized()).norm());
    }
  }
  return {worst <= 1e-9, "worst " + sci(worst) + " over 5 x 1e4 rays"};
}

// 4. Homography path versus the general unproject/rotate/project path.
Outcome homography_equivalence()
{
  std::mt19937_64 rng{4};
  std::uniform_real_distribution<double> fov{0.6, 1.75};
  std::uniform_int_distribution<int> dim{200, 900};
  double worst = 0;
  long compared = 0;
  for (int pair = 0; pair < 100; ++pair)
  {
    const Eigen::Matrix3d r_a = random_rotation(rng);
    const Eigen::Matrix3d r_b = r_a * random_small_rotation(rng, 0.5);
    const View a = View::from_fov("a", r_a, fov(rng), {dim(rng), dim(rng)});
    const View b = View::from_fov("b", r_b, fov(rng), {dim(rng), dim(rng)});
    const Eigen::Matrix3d h = rectilinear_homography(a, b);
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j)
      {
        const Eigen::Vector2d p{(a.size().width - 1) * i / 63.0, (a.size().height - 1) * j / 63.0};
        const auto general = map_point(p, a.intrinsics(), a.rotation(), b.intrinsics(), b.rotation());
        worst = std::max(worst, (apply_homography(h, p) - general).norm());
        ++compared;
      }
  }
  return {worst <= 1e-9 && compared == 100 * 64 * 64,
          std::to_string(compared) + " points, worst " + sci(worst) + " px"};
}

struct Rig
{
  ProjectionMatrix p_a;
  ProjectionMatrix p_b;
  Pose pose_a;
  View view_b;
};

Eigen::Matrix3d looking_down()
{
  Eigen::Matrix3d r;
  r << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  return r;
}

Rig random_rig(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> baseline{0.5, 3.0};
  const double half = baseline(rng) / 2;
  const Pose pose_a{looking_down() * random_small_rotation(rng, 0.3), {-half, 0, 3}};
  const Pose pose_b{looking_down() * random_small_rotation(rng, 0.3), {half, 0, 3}};
  const View view_a = View::from_fov("a", random_small_rotation(rng, 0.4), kPi / 2, {640, 640});
  const View view_b = View::from_fov("b", random_small_rotation(rng, 0.4), kPi / 2, {640, 640});
  return {projection_matrix(view_a, pose_a), projection_matrix(view_b, pose_b), pose_a, view_b};
}

Eigen::Vector3d point_in_front(std::mt19937_64& rng, const Rig& rig)
{
  std::uniform_real_distribution<double> xy{-1.5, 1.5};
  std::uniform_real_distribution<double> z{0.0, 2.0};
  for (;;)
  {
    const Eigen::Vector3d x{xy(rng), xy(rng), z(rng)};
    if (point_depth(rig.p_a, x) > 0.3 && point_depth(rig.p_b, x) > 0.3)
      return x;
  }
}

// 5. Noiseless triangulation and degenerate rejection.
Outcome dlt_exactness()
{
  std::mt19937_64 rng{5};
  double worst = 0;
  for (int k = 0; k < 1000; ++k)
  {
    const Rig rig = random_rig(rng);
    const Eigen::Vector3d x = point_in_front(rng, rig);
    const Correspondence<double> c{project_world(rig.p_a, x).first, project_world(rig.p_b, x).first};
    const auto [ra, rb] = reprojection_error(triangulate_dlt(c, rig.p_a, rig.p_b), c, rig.p_a, rig.p_b);
    worst = std::max({worst, ra, rb});
  }
  int rejected = 0;
  constexpr int degenerate = 100;
  for (int k = 0; k < degenerate; ++k)
  {
    const Rig rig = random_rig(rng);
    // Second camera shares the first camera's center.
    const ProjectionMatrix same_center = projection_matrix(rig.view_b, rig.pose_a);
    const Eigen::Vector3d x = point_in_front(rng, rig);
    const Correspondence<double> c{project_world(rig.p_a, x).first, project_world(same_center, x).first};
    try
    {
      triangulate_dlt(c, rig.p_a, same_center);
    }
    catch (const DegenerateGeometry&)
    {
      ++rejected;
    }
    catch (const Error&)
    {
    }
  }
  return {worst <= 1e-6 && rejected == degenerate,
          "worst residual " + sci(worst) + " px over 1000 instances, " + std::to_string(rejected) +
              "/" + std::to_string(degenerate) + " same-center instances rejected"};
}

double total_squared_error(const Eigen::Vector3d& x, const Correspondence<double>& c,
                           const ProjectionMatrix& p_a, const ProjectionMatrix& p_b)
{
  return (project_world(p_a, x).first - c.a).squaredNorm() +
         (project_world(p_b, x).first - c.b).squaredNorm();
}

// Dense grid over a cube, then compass search from the best node.
Eigen::Vector3d brute_force_minimum(const Correspondence<double>& c, const ProjectionMatrix& p_a,
                                    const ProjectionMatrix& p_b, const Eigen::Vector3d& center,
                                    double half_width)
{
  constexpr int n = 24;
  Eigen::Vector3d best = center;
  double best_err = total_squared_error(center, c, p_a, p_b);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
      {
        const Eigen::Vector3d x =
            center + half_width * (Eigen::Vector3d{double(i), double(j), double(k)} * 2.0 / n -
                                   Eigen::Vector3d::Ones());
        const double e = total_squared_error(x, c, p_a, p_b);
        if (e < best_err)
        {
          best_err = e;
          best = x;
        }
      }
  for (double step = 2 * half_width / n; step > 1e-10;)
  {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis)
      for (double sign : {-1.0, 1.0})
      {
        Eigen::Vector3d x = best;
        x(axis) += sign * step;
        const double e = total_squared_error(x, c, p_a, p_b);
        if (e < best_err)
        {
          best_err = e;
          best = x;
          improved = true;
        }
      }
    if (!improved)
      step /= 2;
  }
  return best;
}

// 6. DLT versus the geometric optimum under noise.
Outcome oracle_equivalence()
{
  std::mt19937_64 rng{6};
  std::normal_distribution<double> noise{0, 1.5};
  double worst_ratio = 0;
  bool oracle_sane = true;
  for (int k = 0; k < 50; ++k)
  {
    const Rig rig = random_rig(rng);
    const Eigen::Vector3d x = point_in_front(rng, rig);
    Correspondence<double> c{project_world(rig.p_a, x).first, project_world(rig.p_b, x).first};
    c.a += Eigen::Vector2d{noise(rng), noise(rng)};
    c.b += Eigen::Vector2d{noise(rng), noise(rng)};
    const double dlt = total_squared_error(triangulate_dlt(c, rig.p_a, rig.p_b), c, rig.p_a, rig.p_b);
    const double opt = total_squared_error(brute_force_minimum(c, rig.p_a, rig.p_b, x, 0.1), c,
                                           rig.p_a, rig.p_b);
    oracle_sane = oracle_sane && opt <= dlt + 1e-9;
    worst_ratio = std::max(worst_ratio, dlt / std::max(opt, 1e-300));
  }
  return {worst_ratio <= 1.1 && oracle_sane,
          "worst DLT/optimum squared-error ratio " + std::to_string(worst_ratio) + " over 50 instances"};
}

double mean_limb_error(const std::vector<Skeleton3D>& frames, const GroundTruth& truth)
{
  double sum = 0;
  int n = 0;
  for (const Skeleton3D& s : frames)
  {
    const auto lengths = limb_lengths(s);
    for (int l = 0; l < kLimbCount; ++l)
      if (lengths[l])
      {
        sum += std::abs(*lengths[l] - truth.limb_lengths.at(s.person_id)[l]);
        ++n;
      }
  }
  return n ? sum / n : std::numeric_limits<double>::infinity();
}

// 7. End to end through the command layer and files.
Outcome end_to_end()
{
  const fs::path dir = fs::current_path() / "acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream sink;

  const Json exact_scene = Json::parse(R"({
    "frames": 60,
    "persons": [
      {"id": 0, "trajectory": {"type": "circle", "radius": 2.0}},
      {"id": 1, "shape": {"thigh": 0.48, "shin": 0.46, "upper_arm": 0.32},
       "trajectory": {"type": "linear", "start": [-2.5, -2.5], "end": [2.5, 2.0]}}
    ]})");
  write_json(dir / "exact.json", exact_scene);
  cmd_synth({dir / "exact.json", 42, dir / "exact"});
  cmd_reconstruct({dir / "exact" / "calibration.json", dir / "exact" / "kp_a.json",
                   dir / "exact" / "kp_b.json", kDefaultMinConfidence, kDefaultMaxResidual,
                   dir / "exact" / "skeletons.json", false},
                  sink);
  cmd_stats({dir / "exact" / "skeletons.json", dir / "exact" / "stats.json", dir / "exact" / "stats.svg"}, sink);

  const GroundTruth truth = ground_truth_from_json(read_json(dir / "exact" / "ground_truth.json"));
  const Json stats = read_json(dir / "exact" / "stats.json");
  double worst_exact = stats["persons"].size() == 2 ? 0 : std::numeric_limits<double>::infinity();
  for (const Json& p : stats["persons"])
    for (int l = 0; l < kLimbCount; ++l)
    {
      const double expected = truth.limb_lengths.at(p["person_id"].get<int>())[l];
      const Json& s = p["limbs"][l];
      if (s["count"].get<int>() != p["frames"].get<int>())
        worst_exact = std::numeric_limits<double>::infinity();
      else
        for (const char* key : {"mean", "min", "max"})
          worst_exact = std::max(worst_exact, std::abs(s[key].get<double>() - expected));
    }

  // 1 px noise, 6 x 6 m room, cameras 3 m up and 1.5 m apart. Central area:
  // walking a 0.5 m circle under the rig. Edge area: walking along the room
  // border.
  auto noisy_error = [&](const char* name, double radius) {
    const Json scene = {{"frames", 300},
                        {"noise_px", 1.0},
                        {"persons", {{{"id", 0}, {"trajectory", {{"type", "circle"}, {"radius", radius}}}}}}};
    write_json(dir / (std::string{name} + ".json"), scene);
    cmd_synth({dir / (std::string{name} + ".json"), 7, dir / name});
    cmd_reconstruct({dir / name / "calibration.json", dir / name / "kp_a.json", dir / name / "kp_b.json",
                     kDefaultMinConfidence, kDefaultMaxResidual, dir / name / "skeletons.json", false},
                    sink);
    return mean_limb_error(read_skeletons(dir / name / "skeletons.json"),
                           ground_truth_from_json(read_json(dir / name / "ground_truth.json")));
  };
  const double central = noisy_error("central", 0.5);
  const double edge = noisy_error("edge", 2.9);

  return {worst_exact <= 1e-6 && central <= 0.03 && edge > central,
          "noiseless worst limb deviation " + sci(worst_exact) + " m; 1 px noise mean limb error central " +
              sci(central * 100) + " cm, edge " + sci(edge * 100) + " cm"};
}

// Pattern on the plane z = 1 in front of the camera: stripes of width 0.2 m
// perpendicular to `axis` (0 for x, 1 for y).
double stripe_value(const Eigen::Vector3d& ray, int axis)
{
  if (ray.z() <= 0)
    return 0;
  const double u = ray(axis) / ray.z();
  return std::fmod(std::floor(u / 0.2), 2.0) == 0 ? 230 : 25;
}

Image render_stripes(const Intrinsics& fish, int axis)
{
  Image img{fish.width(), fish.height(), 1};
  constexpr int ss = 4;
  detail::parallel_rows(fish.height(), [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < fish.width(); ++x)
      {
        double sum = 0;
        for (int sy = 0; sy < ss; ++sy)
          for (int sx = 0; sx < ss; ++sx)
          {
            const Eigen::Vector2d p{x - 0.5 + (sx + 0.5) / ss, y - 0.5 + (sy + 0.5) / ss};
            const auto ray = try_unproject<double>(p, fish);
            sum += ray ? stripe_value(*ray, axis) : 0;
          }
        img.at(x, y) = static_cast<std::uint8_t>(std::lround(sum / (ss * ss)));
      }
  });
  return img;
}

// Line through points by total least squares; returns the largest orthogonal
// distance of any point from it.
double line_fit_deviation(const std::vector<Eigen::Vector2d>& pts)
{
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts)
    mean += p;
  mean /= double(pts.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : pts)
    cov += (p - mean) * (p - mean).transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig{cov};
  const Eigen::Vector2d normal = eig.eigenvectors().col(0);
  double worst = 0;
  for (const auto& p : pts)
    worst = std::max(worst, std::abs(normal.dot(p - mean)));
  return worst;
}

// 8. Straight world edges stay straight after remapping a fisheye render.
Outcome rectilinearity()
{
  const Intrinsics fish{Lens{LensKind::Equidistant, 1024 / kPi}, {511.5, 511.5}, {1024, 1024}};
  double worst = 0;
  int lines = 0;
  for (int axis : {0, 1})
  {
    const Image source = render_stripes(fish, axis);
    for (auto [yaw, pitch] : {std::pair{0.0, 0.0}, {0.45, 0.2}, {-0.3, -0.4}})
    {
      const View view = View::from_fov("fish", rotation_from_yaw_pitch_roll(yaw, pitch, 0.1), kPi / 2, {640, 640});
      const Image out = remap(source, build_lookup_map(view, fish));
      const Intrinsics& vi = view.intrinsics();

      // Sub-pixel mid-level crossings scanned across the stripes, grouped by
      // the world edge they belong to.
      std::map<long, std::vector<Eigen::Vector2d>> edges;
      for (int line = 2; line < 638; ++line)
        for (int t = 2; t < 637; ++t)
        {
          const int x0 = axis == 0 ? t : line;
          const int y0 = axis == 0 ? line : t;
          const int x1 = axis == 0 ? t + 1 : line;
          const int y1 = axis == 0 ? line : t + 1;
          const double a = out.at(x0, y0) - 127.5;
          const double b = out.at(x1, y1) - 127.5;
          if ((a < 0) == (b < 0))
            continue;
          const double s = a / (a - b);
          const Eigen::Vector2d p{x0 + s * (x1 - x0), y0 + s * (y1 - y0)};
          const Eigen::Vector3d ray = view.rotation() * unproject(p, vi);
          if (ray.z() <= 0.2)
            continue;
          const double u = ray(axis) / ray.z() / 0.2;
          if (std::abs(u - std::round(u)) > 0.25)
            continue;
          edges[std::lround(u)].push_back(p);
        }
      for (const auto& [id, pts] : edges)
        if (pts.size() >= 50)
        {
          worst = std::max(worst, line_fit_deviation(pts));
          ++lines;
        }
    }
  }
  return {worst <= 0.5 && lines >= 20,
          std::to_string(lines) + " edges, worst deviation from fitted line " + sci(worst) + " px"};
}

// 9. View generation speed (build the map and apply it).
Outcome performance()
{
  const Intrinsics fish{Lens{LensKind::Equidistant, 1024 / kPi}, {511.5, 511.5}, {1024, 1024}};
  std::mt19937 rng{9};
  std::vector<std::uint8_t> samples(1024 * 1024 * 3);
  for (auto& v : samples)
    v = static_cast<std::uint8_t>(rng());
  const Image source{1024, 1024, 3, std::move(samples)};

  auto median_ms = [&](int size) {
    std::vector<double> times;
    for (int k = 0; k < 15; ++k)
    {
      const View view = View::from_fov("fish", rotation_from_yaw_pitch_roll(0.3 + 0.01 * k, 0.2, 0.0),
                                       kPi / 2, {size, size});
      const auto t0 = Clock::now();
      const Image out = remap(source, build_lookup_map(view, fish));
      times.push_back(ms_since(t0));
      if (out.width() != size)
        return std::numeric_limits<double>::infinity();
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  const double large = median_ms(640);
  const double small = median_ms(320);
  return {large <= 100 && small <= 20,
          "median 640x640 " + sci(large) + " ms, 320x320 " + sci(small) + " ms (" +
              std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " hardware threads)"};
}

Skeleton3D limb_frame(int person, int frame, std::optional<double> upper_arm, std::optional<double> shin)
{
  Skeleton3D s;
  s.person_id = person;
  s.frame_index = frame;
  if (upper_arm)
  {
    s.joints[static_cast<int>(Joint::RShoulder)] = Joint3D{{0, 0, 0}, 0};
    s.joints[static_cast<int>(Joint::RElbow)] = Joint3D{{0, 0, *upper_arm}, 0};
  }
  if (shin)
  {
    s.joints[static_cast<int>(Joint::LKnee)] = Joint3D{{1, 1, 0}, 0};
    s.joints[static_cast<int>(Joint::LAnkle)] = Joint3D{{1, 1, *shin}, 0};
  }
  return s;
}

// 10. Statistics on hand-built sequences.
Outcome stats_correctness()
{
  // Person 0: upper arm 0.25, 0.5, 0.5, 0.75, 1.0 in 5 of 8 frames; shin
  // 0.4 in all 8. Person 2: 54 of 108 frames with an upper arm of 0.3.
  std::vector<Skeleton3D> seq;
  const std::optional<double> arm[8] = {0.5, std::nullopt, 1.0, 0.25, std::nullopt, 0.75, 0.5, std::nullopt};
  for (int f = 0; f < 8; ++f)
    seq.push_back(limb_frame(0, f, arm[f], 0.4));
  for (int f = 0; f < 108; ++f)
    seq.push_back(limb_frame(2, f, f % 2 ? std::optional{0.3} : std::nullopt, std::nullopt));
  std::shuffle(seq.begin(), seq.end(), std::mt19937_64{10});

  const auto stats = accumulate_stats(seq);
  const int r_upper_arm = 2;
  const int l_shin = 11;
  bool ok = stats.size() == 2 && stats[0].person_id == 0 && stats[1].person_id == 2;
  double stddev_error = 0;
  if (ok)
  {
    const PersonStats& p = stats[0];
    const LimbSummary& a = p.limbs[r_upper_arm];
    ok = p.frames == 8 && a.count == 5 && p.frequency[r_upper_arm] == 0.625 && a.mean == 0.6 &&
         a.min == 0.25 && a.q1 == 0.5 && a.median == 0.5 && a.q3 == 0.75 && a.max == 1.0;
    // Population deviation: sqrt(((.35)^2 + 2 (.1)^2 + (.15)^2 + (.4)^2) / 5) = sqrt(0.065).
    stddev_error = std::abs(a.stddev - 0.25495097567963924);

    const LimbSummary& s = p.limbs[l_shin];
    ok = ok && s.count == 8 && p.frequency[l_shin] == 1.0 && s.mean == 0.4 && s.stddev == 0 &&
         s.min == 0.4 && s.max == 0.4;
    ok = ok && p.limbs[0].count == 0 && p.frequency[0] == 0.0;

    const PersonStats& q = stats[1];
    ok = ok && q.frames == 108 && q.limbs[r_upper_arm].count == 54 &&
         q.frequency[r_upper_arm] == 0.5 && q.limbs[r_upper_arm].stddev == 0 &&
         q.limbs[r_upper_arm].mean == 0.3 && q.frequency[l_shin] == 0.0;
  }
  return {ok && stddev_error <= 1e-12,
          std::string{ok ? "counts, frequencies, means and quartiles exact" : "mismatch in exact values"} +
              ", stddev error " + sci(stddev_error)};
}

} // namespace

int main()
{
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"1 lens round trip", lens_round_trips},
      {"2 lens curves", lens_curves},
      {"3 projection round trip", projection_round_trips},
      {"4 homography equivalence", homography_equivalence},
      {"5 DLT exactness", dlt_exactness},
      {"6 DLT vs brute-force optimum", oracle_equivalence},
      {"7 end-to-end synthetic", end_to_end},
      {"8 rectilinearity", rectilinearity},
      {"9 view generation speed", performance},
      {"10 statistics", stats_correctness},
  };
  int failures = 0;
  for (const auto& [name, check] : checks)
  {
    Outcome o;
    try
    {
      o = check();
    }
    catch (const std::exception& e)
    {
      o = {false, std::string{"exception: "} + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << name << "] " << o.detail << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " check(s) failed" : std::string{"all checks passed"})
            << '\n';
  return failures ? 1 : 0;
}
