#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <vector>

#include "fsp/formats.hpp"

namespace fsp {

// Segment lengths in meters. Limb lengths of the COCO model follow from
// these and stay fixed while the body moves.
struct BodyShape
{
  double torso = 0.52;          // hip center to neck, vertical
  double shoulder_half = 0.19;  // neck to shoulder
  double hip_half = 0.10;       // hip center to hip
  double upper_arm = 0.30;
  double forearm = 0.27;
  double thigh = 0.45;
  double shin = 0.43;
  double ankle_height = 0.08;
  double head = 0.18;           // neck to nose, vertical
  double nose_forward = 0.09;
  double eye_half = 0.032;      // eye offset from the nose axis
  double ear_half = 0.075;      // ear offset from the nose axis
};

struct Trajectory
{
  enum class Kind
  {
    Static,
    Linear,
    Circle,
  };
  Kind kind = Kind::Static;
  // Floor positions in world meters. Static uses start; linear walks from
  // start to end over the sequence; circle walks one loop of radius around
  // center.
  Eigen::Vector2d start{0, 0};
  Eigen::Vector2d end{0, 0};
  Eigen::Vector2d center{0, 0};
  double radius = 1.0;
  // Facing direction for static people, radians from +x.
  double heading = 0.0;
};

struct PersonConfig
{
  int id = 0;
  BodyShape shape;
  Trajectory trajectory;
  double gait_amplitude = 0.35;  // radians of arm/leg swing
  double gait_period = 30.0;     // frames
};

struct RigConfig
{
  LensKind lens = LensKind::Equidistant;
  double fov = std::numbers::pi;  // full field of view, radians
  Resolution resolution{1024, 1024};
  double height = 3.0;
  double baseline = 1.5;
};

struct SceneConfig
{
  RigConfig rig;
  double view_fov = std::numbers::pi / 2;
  Resolution view_size{640, 640};
  int frames = 100;
  double noise_px = 0.0;
  // Per-frame, per-view drop probabilities.
  double occlusion_body = 0.0;
  double occlusion_face = 0.0;
  std::vector<PersonConfig> persons{PersonConfig{}};
};

// Angles in the document are degrees.
SceneConfig scene_from_json(const Json& doc);
Json to_json(const SceneConfig& scene);

// Joint positions in world coordinates for one frame.
std::array<Eigen::Vector3d, kJointCount> pose_person(const PersonConfig& person, int frame,
                                                     int frame_count);

std::array<double, kLimbCount> limb_lengths(const BodyShape& shape);

// Ceiling rig: two cameras at the configured height looking straight down,
// separated along world x. World z points up.
Calibration make_rig(const RigConfig& rig);

struct SyntheticData
{
  Calibration calibration;
  std::vector<KeypointRecord> keypoints_a;
  std::vector<KeypointRecord> keypoints_b;
  GroundTruth truth;
};

// Projects each joint through the fisheye model, adds Gaussian pixel noise in
// the fisheye image, drops occluded joints, then expresses the survivors in an
// upright virtual view aimed at the person. Deterministic for a given seed.
SyntheticData synthesize(const SceneConfig& scene, std::uint64_t seed);

// Writes calibration.json, kp_a.json, kp_b.json and ground_truth.json.
void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data);

} // namespace fsp
