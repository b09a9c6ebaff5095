#include "fsp/synth.hpp"

#include <cmath>
#include <random>
#include <set>

namespace fsp {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& what)
{
  throw ParseError{"scene: " + what};
}

void allow_keys(const Json& obj, std::initializer_list<const char*> keys, const char* where)
{
  if (!obj.is_object())
    fail(std::string{where} + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      fail(std::string{"unknown key '"} + key + "' in " + where);
}

double number(const Json& obj, const char* key, double fallback)
{
  const auto it = obj.find(key);
  if (it == obj.end())
    return fallback;
  if (!it->is_number() || !std::isfinite(it->get<double>()))
    fail(std::string{key} + " must be a finite number");
  return it->get<double>();
}

Eigen::Vector2d point(const Json& obj, const char* key, const Eigen::Vector2d& fallback)
{
  const auto it = obj.find(key);
  if (it == obj.end())
    return fallback;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
    fail(std::string{key} + " must be [x, y]");
  return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

Resolution size(const Json& obj, const char* key, Resolution fallback)
{
  const auto it = obj.find(key);
  if (it == obj.end())
    return fallback;
  if (it->is_number_integer())
    return {it->get<int>(), it->get<int>()};
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
      !(*it)[1].is_number_integer())
    fail(std::string{key} + " must be an integer or [width, height]");
  return {(*it)[0].get<int>(), (*it)[1].get<int>()};
}

double probability(const Json& obj, const char* key)
{
  const double p = number(obj, key, 0.0);
  if (p < 0 || p > 1)
    fail(std::string{"occlusion "} + key + " must lie in [0, 1]");
  return p;
}

BodyShape shape_from_json(const Json& j)
{
  allow_keys(j,
             {"torso", "shoulder_half", "hip_half", "upper_arm", "forearm", "thigh", "shin",
              "ankle_height", "head", "nose_forward", "eye_half", "ear_half"},
             "shape");
  BodyShape s;
  for (auto [key, dst] : {std::pair{"torso", &s.torso},
                          {"shoulder_half", &s.shoulder_half},
                          {"hip_half", &s.hip_half},
                          {"upper_arm", &s.upper_arm},
                          {"forearm", &s.forearm},
                          {"thigh", &s.thigh},
                          {"shin", &s.shin},
                          {"ankle_height", &s.ankle_height},
                          {"head", &s.head},
                          {"nose_forward", &s.nose_forward},
                          {"eye_half", &s.eye_half},
                          {"ear_half", &s.ear_half}})
  {
    *dst = number(j, key, *dst);
    if (!(*dst > 0))
      fail(std::string{"shape "} + key + " must be positive");
  }
  return s;
}

Trajectory trajectory_from_json(const Json& j)
{
  allow_keys(j, {"type", "start", "end", "center", "radius", "heading_deg"}, "trajectory");
  Trajectory t;
  const std::string type = j.value("type", std::string{"static"});
  if (type == "static")
    t.kind = Trajectory::Kind::Static;
  else if (type == "linear")
    t.kind = Trajectory::Kind::Linear;
  else if (type == "circle")
    t.kind = Trajectory::Kind::Circle;
  else
    fail("unknown trajectory type '" + type + "'");
  t.start = point(j, "start", t.start);
  t.end = point(j, "end", t.start);
  t.center = point(j, "center", t.center);
  t.radius = number(j, "radius", t.radius);
  t.heading = number(j, "heading_deg", 0.0) * kDeg;
  if (t.kind == Trajectory::Kind::Circle && !(t.radius > 0))
    fail("circle radius must be positive");
  return t;
}

Json to_json(const BodyShape& s)
{
  return {{"torso", s.torso},         {"shoulder_half", s.shoulder_half},
          {"hip_half", s.hip_half},   {"upper_arm", s.upper_arm},
          {"forearm", s.forearm},     {"thigh", s.thigh},
          {"shin", s.shin},           {"ankle_height", s.ankle_height},
          {"head", s.head},           {"nose_forward", s.nose_forward},
          {"eye_half", s.eye_half},   {"ear_half", s.ear_half}};
}

bool is_face(int joint)
{
  return joint == static_cast<int>(Joint::Nose) || joint >= static_cast<int>(Joint::REye);
}

Eigen::Matrix3d looking_down()
{
  Eigen::Matrix3d r;
  r << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  return r;
}

} // namespace

SceneConfig scene_from_json(const Json& doc)
{
  allow_keys(doc, {"rig", "view", "frames", "noise_px", "occlusion", "persons"}, "scene");
  SceneConfig scene;

  if (doc.contains("rig"))
  {
    const Json& r = doc["rig"];
    allow_keys(r, {"lens", "fov_deg", "resolution", "height", "baseline"}, "rig");
    if (r.contains("lens"))
    {
      const auto kind = r["lens"].is_string()
                            ? lens_kind_from_string(r["lens"].get<std::string>())
                            : std::nullopt;
      if (!kind)
        fail("unknown lens");
      scene.rig.lens = *kind;
    }
    scene.rig.fov = number(r, "fov_deg", scene.rig.fov / kDeg) * kDeg;
    scene.rig.resolution = size(r, "resolution", scene.rig.resolution);
    scene.rig.height = number(r, "height", scene.rig.height);
    scene.rig.baseline = number(r, "baseline", scene.rig.baseline);
    if (!(scene.rig.baseline > 0))
      fail("baseline must be positive");
  }
  if (doc.contains("view"))
  {
    const Json& v = doc["view"];
    allow_keys(v, {"fov_deg", "size"}, "view");
    scene.view_fov = number(v, "fov_deg", scene.view_fov / kDeg) * kDeg;
    scene.view_size = size(v, "size", scene.view_size);
    if (!(scene.view_fov > 0 && scene.view_fov < std::numbers::pi))
      fail("view fov_deg must lie in (0, 180)");
  }
  if (scene.rig.resolution.width <= 0 || scene.rig.resolution.height <= 0 ||
      scene.view_size.width <= 0 || scene.view_size.height <= 0)
    fail("image sizes must be positive");

  const double frames = number(doc, "frames", scene.frames);
  if (frames < 0 || frames != std::floor(frames))
    fail("frames must be a non-negative integer");
  scene.frames = static_cast<int>(frames);
  scene.noise_px = number(doc, "noise_px", 0.0);
  if (scene.noise_px < 0)
    fail("noise_px must be non-negative");
  if (doc.contains("occlusion"))
  {
    const Json& o = doc["occlusion"];
    allow_keys(o, {"body", "face"}, "occlusion");
    scene.occlusion_body = probability(o, "body");
    scene.occlusion_face = probability(o, "face");
  }

  if (doc.contains("persons"))
  {
    const Json& ps = doc["persons"];
    if (!ps.is_array())
      fail("persons must be an array");
    scene.persons.clear();
    std::set<int> ids;
    for (const Json& p : ps)
    {
      allow_keys(p, {"id", "shape", "trajectory", "gait_amplitude_deg", "gait_period"}, "person");
      PersonConfig person;
      if (p.contains("id"))
      {
        if (!p["id"].is_number_integer())
          fail("person id must be an integer");
        person.id = p["id"].get<int>();
      }
      else
        person.id = static_cast<int>(scene.persons.size());
      if (!ids.insert(person.id).second)
        fail("duplicate person id " + std::to_string(person.id));
      if (p.contains("shape"))
        person.shape = shape_from_json(p["shape"]);
      if (p.contains("trajectory"))
        person.trajectory = trajectory_from_json(p["trajectory"]);
      person.gait_amplitude = number(p, "gait_amplitude_deg", person.gait_amplitude / kDeg) * kDeg;
      person.gait_period = number(p, "gait_period", person.gait_period);
      if (!(person.gait_period > 0))
        fail("gait_period must be positive");
      scene.persons.push_back(person);
    }
  }
  return scene;
}

Json to_json(const SceneConfig& scene)
{
  Json persons = Json::array();
  for (const PersonConfig& p : scene.persons)
  {
    const Trajectory& t = p.trajectory;
    const char* type = t.kind == Trajectory::Kind::Static   ? "static"
                       : t.kind == Trajectory::Kind::Linear ? "linear"
                                                            : "circle";
    persons.push_back({{"id", p.id},
                       {"shape", to_json(p.shape)},
                       {"trajectory",
                        {{"type", type},
                         {"start", {t.start.x(), t.start.y()}},
                         {"end", {t.end.x(), t.end.y()}},
                         {"center", {t.center.x(), t.center.y()}},
                         {"radius", t.radius},
                         {"heading_deg", t.heading / kDeg}}},
                       {"gait_amplitude_deg", p.gait_amplitude / kDeg},
                       {"gait_period", p.gait_period}});
  }
  return {{"rig",
           {{"lens", to_string(scene.rig.lens)},
            {"fov_deg", scene.rig.fov / kDeg},
            {"resolution", {scene.rig.resolution.width, scene.rig.resolution.height}},
            {"height", scene.rig.height},
            {"baseline", scene.rig.baseline}}},
          {"view",
           {{"fov_deg", scene.view_fov / kDeg},
            {"size", {scene.view_size.width, scene.view_size.height}}}},
          {"frames", scene.frames},
          {"noise_px", scene.noise_px},
          {"occlusion", {{"body", scene.occlusion_body}, {"face", scene.occlusion_face}}},
          {"persons", persons}};
}

std::array<Eigen::Vector3d, kJointCount> pose_person(const PersonConfig& person, int frame,
                                                     int frame_count)
{
  const Trajectory& t = person.trajectory;
  Eigen::Vector2d floor = t.start;
  double heading = t.heading;
  switch (t.kind)
  {
  case Trajectory::Kind::Static:
    break;
  case Trajectory::Kind::Linear:
  {
    const double u = frame_count > 1 ? double(frame) / double(frame_count - 1) : 0.0;
    const Eigen::Vector2d d = t.end - t.start;
    floor = t.start + u * d;
    if (d.norm() > 0)
      heading = std::atan2(d.y(), d.x());
    break;
  }
  case Trajectory::Kind::Circle:
  {
    const double a = 2 * std::numbers::pi * frame / std::max(frame_count, 1);
    floor = t.center + t.radius * Eigen::Vector2d{std::cos(a), std::sin(a)};
    heading = a + std::numbers::pi / 2;
    break;
  }
  }

  const BodyShape& s = person.shape;
  const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d fwd{std::cos(heading), std::sin(heading), 0};
  const Eigen::Vector3d right = fwd.cross(up);
  // Unit direction swung forward by `a` from straight down.
  auto limb_dir = [&](double a) -> Eigen::Vector3d { return std::sin(a) * fwd - std::cos(a) * up; };

  const double swing = person.gait_amplitude * std::sin(2 * std::numbers::pi * frame / person.gait_period);
  const double elbow_bend = 0.3;
  const double knee_bend = 0.15 * (1 + std::sin(2 * std::numbers::pi * frame / person.gait_period));

  std::array<Eigen::Vector3d, kJointCount> j;
  const Eigen::Vector3d pelvis = Eigen::Vector3d{floor.x(), floor.y(), 0} +
                                 (s.ankle_height + s.thigh + s.shin) * up;
  const Eigen::Vector3d neck = pelvis + s.torso * up;
  auto at = [&](Joint k) -> Eigen::Vector3d& { return j[static_cast<int>(k)]; };

  at(Joint::Neck) = neck;
  at(Joint::RShoulder) = neck + s.shoulder_half * right;
  at(Joint::LShoulder) = neck - s.shoulder_half * right;
  at(Joint::RElbow) = at(Joint::RShoulder) + s.upper_arm * limb_dir(swing);
  at(Joint::LElbow) = at(Joint::LShoulder) + s.upper_arm * limb_dir(-swing);
  at(Joint::RWrist) = at(Joint::RElbow) + s.forearm * limb_dir(swing + elbow_bend);
  at(Joint::LWrist) = at(Joint::LElbow) + s.forearm * limb_dir(-swing + elbow_bend);
  at(Joint::RHip) = pelvis + s.hip_half * right;
  at(Joint::LHip) = pelvis - s.hip_half * right;
  at(Joint::RKnee) = at(Joint::RHip) + s.thigh * limb_dir(-swing);
  at(Joint::LKnee) = at(Joint::LHip) + s.thigh * limb_dir(swing);
  at(Joint::RAnkle) = at(Joint::RKnee) + s.shin * limb_dir(-swing - knee_bend);
  at(Joint::LAnkle) = at(Joint::LKnee) + s.shin * limb_dir(swing - knee_bend);
  at(Joint::Nose) = neck + s.head * up + s.nose_forward * fwd;
  at(Joint::REye) = at(Joint::Nose) + s.eye_half * right + 0.035 * up - 0.02 * fwd;
  at(Joint::LEye) = at(Joint::Nose) - s.eye_half * right + 0.035 * up - 0.02 * fwd;
  at(Joint::REar) = at(Joint::Nose) + s.ear_half * right + 0.01 * up - 0.09 * fwd;
  at(Joint::LEar) = at(Joint::Nose) - s.ear_half * right + 0.01 * up - 0.09 * fwd;
  return j;
}

std::array<double, kLimbCount> limb_lengths(const BodyShape& shape)
{
  PersonConfig p;
  p.shape = shape;
  p.gait_amplitude = 0;
  const auto joints = pose_person(p, 0, 1);
  std::array<double, kLimbCount> out;
  for (int l = 0; l < kLimbCount; ++l)
    out[l] = (joints[kCoco18.limbs[l].from] - joints[kCoco18.limbs[l].to]).norm();
  return out;
}

Calibration make_rig(const RigConfig& rig)
{
  const Lens unit{rig.lens, 1.0};
  const double half_fov = rig.fov / 2;
  if (!(half_fov > 0) || !unit.theta_in_domain(half_fov))
    throw ParseError{"scene: rig fov_deg is outside the lens domain"};
  const double radius = std::min(rig.resolution.width, rig.resolution.height) / 2.0;
  const Lens lens{rig.lens, radius / unit.theta_to_rd(half_fov)};
  const Intrinsics intr{lens,
                        {(rig.resolution.width - 1) / 2.0, (rig.resolution.height - 1) / 2.0},
                        rig.resolution};
  Calibration calib;
  calib.cameras.push_back(
      {"cam_a", intr, Pose{looking_down(), {-rig.baseline / 2, 0, rig.height}}, {0, 0, -1}});
  calib.cameras.push_back(
      {"cam_b", intr, Pose{looking_down(), {rig.baseline / 2, 0, rig.height}}, {0, 0, -1}});
  return calib;
}

SyntheticData synthesize(const SceneConfig& scene, std::uint64_t seed)
{
  SyntheticData out;
  out.calibration = make_rig(scene.rig);
  for (const PersonConfig& p : scene.persons)
    out.truth.limb_lengths[p.id] = limb_lengths(p.shape);

  std::mt19937_64 rng{seed};
  std::normal_distribution<double> noise{0.0, 1.0};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};

  for (int f = 0; f < scene.frames; ++f)
  {
    for (const PersonConfig& person : scene.persons)
    {
      const auto joints = pose_person(person, f, scene.frames);
      Skeleton3D truth;
      truth.frame_index = f;
      truth.person_id = person.id;
      for (int j = 0; j < kJointCount; ++j)
        truth.joints[j] = Joint3D{joints[j], 0.0};
      out.truth.frames.push_back(truth);

      const Eigen::Vector3d body_center =
          (joints[static_cast<int>(Joint::Neck)] + (joints[static_cast<int>(Joint::RHip)] +
                                                   joints[static_cast<int>(Joint::LHip)]) / 2) / 2;

      for (int c = 0; c < 2; ++c)
      {
        const CameraCalibration& cam = out.calibration.cameras[c];
        const Pose to_camera = cam.world_pose.inverse();
        const Intrinsics& fish = cam.intrinsics;

        // Draw every variate up front so the stream does not depend on
        // which joints happen to be visible.
        std::array<Eigen::Vector2d, kJointCount> offsets;
        std::array<double, kJointCount> drop;
        for (int j = 0; j < kJointCount; ++j)
        {
          offsets[j] = {noise(rng), noise(rng)};
          drop[j] = uniform(rng);
        }

        const auto target = try_project<double>(to_camera * body_center, fish);
        if (!target)
          continue;
        const View view = focus_view(View::from_fov(cam.id, Eigen::Matrix3d::Identity(),
                                                    scene.view_fov, scene.view_size),
                                     *target, fish, std::optional{cam.camera_gravity()});
        const Intrinsics& vi = view.intrinsics();
        const Eigen::Matrix3d to_view = view.rotation().transpose();

        KeypointRecord rec{cam.id, view, {}};
        rec.skeleton.frame_index = f;
        rec.skeleton.person_id = person.id;
        for (int j = 0; j < kJointCount; ++j)
        {
          const double p_drop = is_face(j) ? scene.occlusion_face : scene.occlusion_body;
          if (drop[j] < p_drop)
            continue;
          const auto pixel = try_project<double>(to_camera * joints[j], fish);
          if (!pixel)
            continue;
          const Eigen::Vector2d noisy = *pixel + scene.noise_px * offsets[j];
          const auto ray = try_unproject<double>(noisy, fish);
          if (!ray)
            continue;
          const auto in_view = try_project<double>(to_view * *ray, vi);
          if (!in_view || !vi.contains(*in_view))
            continue;
          rec.skeleton.joints[j] = Keypoint2D{*in_view, 1.0};
        }
        (c == 0 ? out.keypoints_a : out.keypoints_b).push_back(std::move(rec));
      }
    }
  }
  return out;
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw InputError{"cannot create " + dir.string() + ": " + ec.message()};
  write_json(dir / "calibration.json", to_json(data.calibration));
  write_json(dir / "kp_a.json", keypoints_to_json(data.keypoints_a));
  write_json(dir / "kp_b.json", keypoints_to_json(data.keypoints_b));
  write_json(dir / "ground_truth.json", to_json(data.truth));
}

} // namespace fsp
