#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsp/camera.hpp"
#include "fsp/skeleton.hpp"
#include "fsp/view_synthesis.hpp"

namespace fsp {

using Json = nlohmann::json;

struct CameraCalibration
{
  std::string id;
  Intrinsics intrinsics;
  Pose world_pose;
  // Direction of gravity in world coordinates.
  Eigen::Vector3d gravity{0, 0, -1};

  // Gravity expressed in the camera frame.
  Eigen::Vector3d camera_gravity() const;
};

struct Calibration
{
  std::vector<CameraCalibration> cameras;

  // Throws InputError for unknown ids.
  const CameraCalibration& camera(std::string_view id) const;
};

// One (frame, camera, person) detection. Joint coordinates are pixels of the
// rectilinear view the detector ran on.
struct KeypointRecord
{
  std::string camera_id;
  View view;
  Skeleton2D skeleton;
};

struct GroundTruth
{
  std::vector<Skeleton3D> frames;
  std::map<int, std::array<double, kLimbCount>> limb_lengths;
};

// Whole-document I/O. Readers throw ParseError on malformed or invalid
// content (including geometrically invalid calibration values) and on
// unreadable files.
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

Calibration calibration_from_json(const Json& doc);
Json to_json(const Calibration& calib);
Calibration read_calibration(const std::filesystem::path& path);

std::vector<KeypointRecord> keypoints_from_json(const Json& doc);
Json keypoints_to_json(const std::vector<KeypointRecord>& records);
std::vector<KeypointRecord> read_keypoints(const std::filesystem::path& path);

std::vector<Skeleton3D> skeletons_from_json(const Json& doc);
Json skeletons_to_json(const std::vector<Skeleton3D>& frames);
// An empty or whitespace-only file reads as zero frames.
std::vector<Skeleton3D> read_skeletons(const std::filesystem::path& path);

GroundTruth ground_truth_from_json(const Json& doc);
Json to_json(const GroundTruth& truth);

Json stats_to_json(const std::vector<PersonStats>& stats, const BodyModel& model = kCoco18);

} // namespace fsp
