#include "fsp/formats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fsp {

namespace {

constexpr int kFormatVersion = 1;

[[noreturn]] void fail(const std::string& what)
{
  throw ParseError{what};
}

const Json& field(const Json& obj, const char* key)
{
  if (!obj.is_object())
    fail(std::string{"expected an object holding '"} + key + "'");
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(std::string{"missing field '"} + key + "'");
  return *it;
}

double number(const Json& v, const char* what)
{
  if (!v.is_number())
    fail(std::string{what} + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    fail(std::string{what} + " must be finite");
  return x;
}

int integer(const Json& v, const char* what)
{
  if (!v.is_number_integer())
    fail(std::string{what} + " must be an integer");
  return v.get<int>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const Json& v, const char* what)
{
  if (!v.is_array() || v.size() != N)
    fail(std::string{what} + " must be an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i)
    out(i) = number(v[i], what);
  return out;
}

Resolution resolution(const Json& v, const char* what)
{
  if (!v.is_array() || v.size() != 2)
    fail(std::string{what} + " must be [width, height]");
  return {integer(v[0], what), integer(v[1], what)};
}

// Row-major flattening; vectors become plain arrays.
template <typename Derived>
Json array(const Eigen::MatrixBase<Derived>& m)
{
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back(m(r, c));
  return out;
}

template <int R, int C>
Eigen::Matrix<double, R, C> matrix(const Json& v, const char* what)
{
  const auto flat = vec<R * C>(v, what);
  Eigen::Matrix<double, R, C> m;
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c)
      m(r, c) = flat(r * C + c);
  return m;
}

// Converts library exceptions raised while building values from a document
// into parse errors that name the offending context.
template <typename F>
auto parsing(const std::string& context, F&& body)
{
  try
  {
    return body();
  }
  catch (const ParseError& e)
  {
    throw ParseError{context + ": " + e.what()};
  }
  catch (const Error& e)
  {
    throw ParseError{context + ": " + e.what()};
  }
  catch (const Json::exception& e)
  {
    throw ParseError{context + ": " + e.what()};
  }
}

Json joint_names(const BodyModel& model)
{
  Json names = Json::array();
  for (std::string_view n : model.joints)
    names.push_back(std::string{n});
  return names;
}

void check_joint_names(const Json& doc)
{
  const auto it = doc.find("joint_names");
  if (it == doc.end())
    return;
  if (*it != joint_names(kCoco18))
    fail("joint_names does not match the COCO 18-joint order");
}

Json null_or(double v)
{
  return std::isnan(v) ? Json(nullptr) : Json(v);
}

} // namespace

Eigen::Vector3d CameraCalibration::camera_gravity() const
{
  return world_pose.rotation().transpose() * gravity;
}

const CameraCalibration& Calibration::camera(std::string_view id) const
{
  const auto it =
      std::find_if(cameras.begin(), cameras.end(), [&](const auto& c) { return c.id == id; });
  if (it == cameras.end())
    throw InputError{"calibration has no camera '" + std::string{id} + "'"};
  return *it;
}

Json read_json(const std::filesystem::path& path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
    fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try
  {
    return Json::parse(buf.str());
  }
  catch (const Json::parse_error& e)
  {
    fail(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& doc)
{
  std::ofstream out{path, std::ios::binary};
  if (!out)
    throw InputError{"cannot write " + path.string()};
  out << doc.dump(2) << '\n';
  if (!out)
    throw InputError{"failed writing " + path.string()};
}

Calibration calibration_from_json(const Json& doc)
{
  return parsing("calibration", [&] {
    const Json& cams = field(doc, "cameras");
    if (!cams.is_array())
      fail("'cameras' must be an array");
    Calibration calib;
    for (const Json& c : cams)
    {
      const std::string id = field(c, "id").get<std::string>();
      calib.cameras.push_back(parsing("camera '" + id + "'", [&] {
        const std::string lens_name = field(c, "lens").get<std::string>();
        const auto kind = lens_kind_from_string(lens_name);
        if (!kind)
          fail("unknown lens '" + lens_name + "'");
        const Lens lens{*kind, number(field(c, "focal_length"), "focal_length")};
        const Intrinsics intr{lens, vec<2>(field(c, "principal_point"), "principal_point"),
                              resolution(field(c, "resolution"), "resolution")};
        const Pose pose = Pose::from_matrix(matrix<4, 4>(field(c, "world_pose"), "world_pose"));
        Eigen::Vector3d gravity{0, 0, -1};
        if (c.contains("gravity"))
          gravity = vec<3>(c["gravity"], "gravity");
        if (!(gravity.norm() > 0))
          fail("gravity must be non-zero");
        return CameraCalibration{id, intr, pose, gravity.normalized()};
      }));
      if (std::count_if(calib.cameras.begin(), calib.cameras.end(),
                        [&](const auto& x) { return x.id == id; }) > 1)
        fail("duplicate camera id '" + id + "'");
    }
    return calib;
  });
}

Json to_json(const Calibration& calib)
{
  Json cams = Json::array();
  for (const CameraCalibration& c : calib.cameras)
  {
    const Resolution r = c.intrinsics.resolution();
    cams.push_back({{"id", c.id},
                    {"lens", to_string(c.intrinsics.lens().kind())},
                    {"focal_length", c.intrinsics.lens().focal_length()},
                    {"principal_point", array(c.intrinsics.principal_point())},
                    {"resolution", Json::array({r.width, r.height})},
                    {"world_pose", array(c.world_pose.matrix())},
                    {"gravity", array(c.gravity)}});
  }
  return {{"version", kFormatVersion}, {"cameras", cams}};
}

Calibration read_calibration(const std::filesystem::path& path)
{
  return parsing(path.string(), [&] { return calibration_from_json(read_json(path)); });
}

std::vector<KeypointRecord> keypoints_from_json(const Json& doc)
{
  return parsing("keypoints", [&] {
    check_joint_names(doc);
    const Json& recs = field(doc, "records");
    if (!recs.is_array())
      fail("'records' must be an array");
    std::vector<KeypointRecord> out;
    for (std::size_t n = 0; n < recs.size(); ++n)
    {
      const Json& r = recs[n];
      out.push_back(parsing("record " + std::to_string(n), [&] {
        const std::string camera = field(r, "camera_id").get<std::string>();
        const Json& v = field(r, "view");
        const Resolution size = resolution(field(v, "size"), "view size");
        const Intrinsics intr{Lens{LensKind::Rectilinear, number(field(v, "focal_length"), "focal_length")},
                              vec<2>(field(v, "principal_point"), "principal_point"), size};
        const View view{camera, matrix<3, 3>(field(v, "rotation"), "rotation"), intr};

        Skeleton2D s;
        s.frame_index = integer(field(r, "frame_index"), "frame_index");
        s.person_id = integer(field(r, "person_id"), "person_id");
        const Json& joints = field(r, "joints");
        if (!joints.is_array() || joints.size() != kJointCount)
          fail("'joints' must hold 18 entries");
        for (int j = 0; j < kJointCount; ++j)
        {
          if (joints[j].is_null())
            continue;
          const Eigen::Vector3d k = vec<3>(joints[j], "joint");
          if (k.z() < 0 || k.z() > 1)
            fail("joint confidence must lie in [0, 1]");
          if (!intr.contains(k.head<2>()))
            fail("joint " + std::string{kCoco18.joints[j]} + " lies outside the view");
          s.joints[j] = Keypoint2D{k.head<2>(), k.z()};
        }
        return KeypointRecord{camera, view, s};
      }));
    }
    return out;
  });
}

Json keypoints_to_json(const std::vector<KeypointRecord>& records)
{
  Json recs = Json::array();
  for (const KeypointRecord& r : records)
  {
    const Intrinsics& intr = r.view.intrinsics();
    Json joints = Json::array();
    for (const auto& j : r.skeleton.joints)
      joints.push_back(j ? Json::array({j->position.x(), j->position.y(), j->confidence})
                         : Json(nullptr));
    recs.push_back({{"frame_index", r.skeleton.frame_index},
                    {"camera_id", r.camera_id},
                    {"person_id", r.skeleton.person_id},
                    {"view",
                     {{"rotation", array(r.view.rotation())},
                      {"focal_length", intr.lens().focal_length()},
                      {"principal_point", array(intr.principal_point())},
                      {"size", Json::array({r.view.size().width, r.view.size().height})}}},
                    {"joints", joints}});
  }
  return {{"version", kFormatVersion}, {"joint_names", joint_names(kCoco18)}, {"records", recs}};
}

std::vector<KeypointRecord> read_keypoints(const std::filesystem::path& path)
{
  return parsing(path.string(), [&] { return keypoints_from_json(read_json(path)); });
}

namespace {

Skeleton3D skeleton_from_json(const Json& f)
{
  Skeleton3D s;
  s.frame_index = integer(field(f, "frame_index"), "frame_index");
  s.person_id = integer(field(f, "person_id"), "person_id");
  const Json& joints = field(f, "joints");
  if (!joints.is_array() || joints.size() != kJointCount)
    fail("'joints' must hold 18 entries");
  for (int j = 0; j < kJointCount; ++j)
  {
    if (joints[j].is_null())
      continue;
    const double residual = number(field(joints[j], "residual"), "residual");
    if (residual < 0)
      fail("residual must be non-negative");
    s.joints[j] = Joint3D{vec<3>(field(joints[j], "position"), "position"), residual};
  }
  return s;
}

Json frames_to_json(const std::vector<Skeleton3D>& frames)
{
  Json out = Json::array();
  for (const Skeleton3D& s : frames)
  {
    Json joints = Json::array();
    for (const auto& j : s.joints)
      joints.push_back(j ? Json::object({{"position", array(j->position)}, {"residual", j->residual}})
                         : Json(nullptr));
    out.push_back(
        {{"frame_index", s.frame_index}, {"person_id", s.person_id}, {"joints", joints}});
  }
  return out;
}

std::vector<Skeleton3D> frames_from_json(const Json& doc)
{
  check_joint_names(doc);
  const Json& frames = field(doc, "frames");
  if (!frames.is_array())
    fail("'frames' must be an array");
  std::vector<Skeleton3D> out;
  for (std::size_t n = 0; n < frames.size(); ++n)
    out.push_back(parsing("frame " + std::to_string(n), [&] { return skeleton_from_json(frames[n]); }));
  return out;
}

} // namespace

std::vector<Skeleton3D> skeletons_from_json(const Json& doc)
{
  return parsing("skeletons", [&] { return frames_from_json(doc); });
}

Json skeletons_to_json(const std::vector<Skeleton3D>& frames)
{
  return {{"version", kFormatVersion},
          {"joint_names", joint_names(kCoco18)},
          {"frames", frames_to_json(frames)}};
}

std::vector<Skeleton3D> read_skeletons(const std::filesystem::path& path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
    fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
    return {};
  return parsing(path.string(), [&] { return skeletons_from_json(Json::parse(text)); });
}

GroundTruth ground_truth_from_json(const Json& doc)
{
  return parsing("ground truth", [&] {
    GroundTruth truth;
    truth.frames = frames_from_json(doc);
    const Json& persons = field(doc, "persons");
    if (!persons.is_array())
      fail("'persons' must be an array");
    for (const Json& p : persons)
    {
      const int id = integer(field(p, "person_id"), "person_id");
      const auto lengths = vec<kLimbCount>(field(p, "limb_lengths"), "limb_lengths");
      auto& dst = truth.limb_lengths[id];
      for (int l = 0; l < kLimbCount; ++l)
        dst[l] = lengths(l);
    }
    return truth;
  });
}

Json to_json(const GroundTruth& truth)
{
  Json persons = Json::array();
  for (const auto& [id, lengths] : truth.limb_lengths)
    persons.push_back({{"person_id", id}, {"limb_lengths", lengths}});
  return {{"version", kFormatVersion},
          {"joint_names", joint_names(kCoco18)},
          {"persons", persons},
          {"frames", frames_to_json(truth.frames)}};
}

Json stats_to_json(const std::vector<PersonStats>& stats, const BodyModel& model)
{
  Json persons = Json::array();
  for (const PersonStats& p : stats)
  {
    Json limbs = Json::array();
    for (int l = 0; l < kLimbCount; ++l)
    {
      const LimbSummary& s = p.limbs[l];
      limbs.push_back({{"limb", model.limb_name(l)},
                       {"count", s.count},
                       {"frequency", p.frequency[l]},
                       {"mean", null_or(s.mean)},
                       {"stddev", null_or(s.stddev)},
                       {"min", null_or(s.min)},
                       {"q1", null_or(s.q1)},
                       {"median", null_or(s.median)},
                       {"q3", null_or(s.q3)},
                       {"max", null_or(s.max)}});
    }
    persons.push_back({{"person_id", p.person_id}, {"frames", p.frames}, {"limbs", limbs}});
  }
  return {{"version", kFormatVersion}, {"persons", persons}};
}

} // namespace fsp
