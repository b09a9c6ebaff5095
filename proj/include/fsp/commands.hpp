#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsp/formats.hpp"

namespace fsp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitGeometry = 3;

struct RemapOptions
{
  std::filesystem::path calib;
  std::string camera;
  std::filesystem::path image;
  // Degrees. Ignored when a target pixel is given.
  double yaw = 0;
  double pitch = 0;
  double roll = 0;
  std::optional<Eigen::Vector2d> target;
  double fov = 90;
  Resolution size{640, 640};
  Interpolation interpolation = Interpolation::Bilinear;
  std::uint8_t fill = 0;
  std::optional<std::filesystem::path> map_out;
  std::filesystem::path out;
  bool timings = false;
};

struct ReconstructOptions
{
  std::filesystem::path calib;
  std::filesystem::path kp_a;
  std::filesystem::path kp_b;
  double min_conf = kDefaultMinConfidence;
  double max_residual = kDefaultMaxResidual;
  std::filesystem::path out;
  bool timings = false;
};

struct StatsOptions
{
  std::filesystem::path in;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> svg;
};

struct SynthOptions
{
  std::optional<std::filesystem::path> config;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir;
};

struct CurvesOptions
{
  std::filesystem::path out;
  int samples = 361;
};

// Pairs records of the two files by (frame, person) and reconstructs each
// pair. Output is ordered by frame, then person. Records present in only one
// file are skipped.
std::vector<Skeleton3D> reconstruct_sequence(const Calibration& calib,
                                             const std::vector<KeypointRecord>& a,
                                             const std::vector<KeypointRecord>& b,
                                             double min_conf = kDefaultMinConfidence,
                                             double max_residual = kDefaultMaxResidual);

// Plain-text table of limb statistics, one row per (person, limb).
std::string stats_table(const std::vector<PersonStats>& stats, const BodyModel& model = kCoco18);

// Commands throw fsp::Error on failure; `log` receives warnings and timings.
void cmd_remap(const RemapOptions& opts, std::ostream& log);
void cmd_reconstruct(const ReconstructOptions& opts, std::ostream& log);
void cmd_stats(const StatsOptions& opts, std::ostream& out);
void cmd_synth(const SynthOptions& opts);
void cmd_curves(const CurvesOptions& opts);

// Parses arguments, runs the command and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fsp
