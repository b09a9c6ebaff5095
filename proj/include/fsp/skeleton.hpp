#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fsp/triangulation.hpp"

namespace fsp {

inline constexpr int kJointCount = 18;
inline constexpr int kLimbCount = 17;

// COCO 18-joint order as emitted by OpenPose.
enum class Joint : int
{
  Nose,
  Neck,
  RShoulder,
  RElbow,
  RWrist,
  LShoulder,
  LElbow,
  LWrist,
  RHip,
  RKnee,
  RAnkle,
  LHip,
  LKnee,
  LAnkle,
  REye,
  LEye,
  REar,
  LEar,
};

struct Limb
{
  int from;
  int to;
};

struct BodyModel
{
  std::array<std::string_view, kJointCount> joints;
  std::array<Limb, kLimbCount> limbs;

  // "r_shoulder-r_elbow" and so on.
  std::string limb_name(int limb) const;
  // Index of a joint by name, or -1.
  int joint_index(std::string_view name) const;
};

inline constexpr BodyModel kCoco18{
    {"nose", "neck", "r_shoulder", "r_elbow", "r_wrist", "l_shoulder", "l_elbow", "l_wrist",
     "r_hip", "r_knee", "r_ankle", "l_hip", "l_knee", "l_ankle", "r_eye", "l_eye", "r_ear",
     "l_ear"},
    {{{1, 2},
      {1, 5},
      {2, 3},
      {3, 4},
      {5, 6},
      {6, 7},
      {1, 8},
      {8, 9},
      {9, 10},
      {1, 11},
      {11, 12},
      {12, 13},
      {1, 0},
      {0, 14},
      {14, 16},
      {0, 15},
      {15, 17}}},
};

struct Keypoint2D
{
  Eigen::Vector2d position;
  double confidence = 1.0;
};

struct Skeleton2D
{
  int frame_index = 0;
  int person_id = 0;
  std::array<std::optional<Keypoint2D>, kJointCount> joints{};

  int joint_count() const;
};

struct Joint3D
{
  Eigen::Vector3d position;
  // Larger of the two per-view reprojection errors, in pixels.
  double residual = 0.0;
};

struct Skeleton3D
{
  int frame_index = 0;
  int person_id = 0;
  std::array<std::optional<Joint3D>, kJointCount> joints{};

  int joint_count() const;
};

struct JointCorrespondence
{
  int joint;
  Correspondence<double> points;
};

inline constexpr double kDefaultMinConfidence = 0.3;
inline constexpr double kDefaultMaxResidual = 5.0;

// One correspondence per joint present in both skeletons with both
// confidences >= min_conf. The carried confidence is the smaller one.
std::vector<JointCorrespondence> match_joints(const Skeleton2D& a, const Skeleton2D& b,
                                              double min_conf = kDefaultMinConfidence);

// Triangulates each correspondence. Joints that fail geometrically or
// reproject worse than max_residual pixels are left empty.
Skeleton3D reconstruct_skeleton(std::span<const JointCorrespondence> corrs,
                                const ProjectionMatrix& p_a, const ProjectionMatrix& p_b,
                                double max_residual = kDefaultMaxResidual);

std::array<std::optional<double>, kLimbCount> limb_lengths(const Skeleton3D& s,
                                                           const BodyModel& model = kCoco18);

// Box statistics over realized lengths. With count 0 every other field is NaN.
// stddev is the population standard deviation; quartiles interpolate
// linearly between order statistics.
struct LimbSummary
{
  std::size_t count = 0;
  double mean;
  double stddev;
  double min;
  double q1;
  double median;
  double q3;
  double max;
};

LimbSummary summarize(std::vector<double> samples);

struct PersonStats
{
  int person_id = 0;
  std::size_t frames = 0;
  std::array<LimbSummary, kLimbCount> limbs{};
  // Fraction of the person's frames with the limb reconstructed.
  std::array<double, kLimbCount> frequency{};
};

// Mergeable aggregate: partial accumulators over disjoint frame sets can be
// combined in any order with identical results.
class StatsAccumulator
{
public:
  explicit StatsAccumulator(const BodyModel& model = kCoco18);

  void add(const Skeleton3D& s);
  void merge(const StatsAccumulator& other);

  // One entry per person, ordered by person id.
  std::vector<PersonStats> result() const;

private:
  struct PersonSamples
  {
    std::size_t frames = 0;
    std::array<std::vector<double>, kLimbCount> lengths;
  };

  BodyModel model_;
  std::map<int, PersonSamples> persons_;
};

std::vector<PersonStats> accumulate_stats(std::span<const Skeleton3D> sequence,
                                          const BodyModel& model = kCoco18);

} // namespace fsp
