#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <type_traits>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fsp/camera.hpp"
#include "fsp/errors.hpp"
#include "fsp/image.hpp"

namespace fsp {

// A pinhole camera sharing the optical center of a parent fisheye camera.
// `rotation` maps view coordinates into the parent camera frame.
template <typename Scalar = double>
class VirtualView
{
public:
  VirtualView(std::string parent, const Matrix3<Scalar>& rotation,
              CameraIntrinsics<Scalar> intrinsics)
    : parent_{std::move(parent)}
    , rotation_{rotation}
    , intrinsics_{std::move(intrinsics)}
  {
    if (!RigidPose<Scalar>::is_rotation(rotation))
      throw InputError{"virtual view rotation is not orthonormal"};
    if (intrinsics_.lens().kind() != LensKind::Rectilinear)
      throw NotRectilinear{"virtual views use a rectilinear lens"};
  }

  // `fov` is the horizontal field of view in radians.
  static VirtualView from_fov(std::string parent, const Matrix3<Scalar>& rotation,
                              Scalar fov, Resolution size)
  {
    return VirtualView{std::move(parent), rotation,
                       CameraIntrinsics<Scalar>::rectilinear(fov, size)};
  }

  const std::string& parent() const { return parent_; }
  const Matrix3<Scalar>& rotation() const { return rotation_; }
  const CameraIntrinsics<Scalar>& intrinsics() const { return intrinsics_; }
  Resolution size() const { return intrinsics_.resolution(); }

  VirtualView with_rotation(const Matrix3<Scalar>& rotation) const
  {
    return VirtualView{parent_, rotation, intrinsics_};
  }

private:
  std::string parent_;
  Matrix3<Scalar> rotation_;
  CameraIntrinsics<Scalar> intrinsics_;
};

// Per destination pixel, the sub-pixel source coordinate to sample, or NaN
// when the destination ray misses the source image.
template <typename Scalar = double>
class LookupMap
{
public:
  using Coordinates = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

  LookupMap(Resolution size, Resolution source)
    : size_{size}
    , source_{source}
    , coords_{Coordinates::Constant(2, static_cast<Eigen::Index>(size.width) * size.height,
                                    std::numeric_limits<Scalar>::quiet_NaN())}
  {
    if (size.width <= 0 || size.height <= 0)
      throw InputError{"lookup map size must be positive"};
  }

  Resolution size() const { return size_; }
  Resolution source_size() const { return source_; }

  Eigen::Index index(int x, int y) const
  {
    return static_cast<Eigen::Index>(y) * size_.width + x;
  }

  bool valid(int x, int y) const { return !std::isnan(coords_(0, index(x, y))); }
  Vector2<Scalar> at(int x, int y) const { return coords_.col(index(x, y)); }
  void set(int x, int y, const Vector2<Scalar>& p) { coords_.col(index(x, y)) = p; }
  void invalidate(int x, int y)
  {
    coords_.col(index(x, y)).setConstant(std::numeric_limits<Scalar>::quiet_NaN());
  }

  const Coordinates& coordinates() const { return coords_; }
  Coordinates& coordinates() { return coords_; }

  std::size_t valid_count() const
  {
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < coords_.cols(); ++i)
      n += std::isnan(coords_(0, i)) ? 0 : 1;
    return n;
  }

private:
  Resolution size_;
  Resolution source_;
  Coordinates coords_;
};

namespace detail {

// Splits [0, rows) into contiguous blocks, one per hardware thread. Runs
// inline when only one thread is available.
template <typename F>
void parallel_rows(int rows, F&& body)
{
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(std::max(rows / 16, 1))));
  if (workers <= 1)
  {
    body(0, rows);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const int block = (rows + workers - 1) / workers;
  for (int begin = 0; begin < rows; begin += block)
    threads.emplace_back([&body, begin, end = std::min(rows, begin + block)] { body(begin, end); });
}

} // namespace detail

// Source coordinates within this distance outside [0, size-1] are snapped to
// the border instead of being rejected.
inline constexpr double kMapBoundsTolerance = 1e-6;

// Builds the lookup map that renders `view` from images of the parent camera
// `source`.
template <typename Scalar>
LookupMap<Scalar> build_lookup_map(const VirtualView<Scalar>& view,
                                   const CameraIntrinsics<Scalar>& source)
{
  const Resolution size = view.size();
  LookupMap<Scalar> map{size, source.resolution()};
  const Vector2<Scalar> c = view.intrinsics().principal_point();
  const Scalar f = view.intrinsics().lens().focal_length();
  const Matrix3<Scalar>& rotation = view.rotation();
  const Scalar tol = Scalar(kMapBoundsTolerance);
  const Scalar max_x = Scalar(source.width() - 1);
  const Scalar max_y = Scalar(source.height() - 1);

  detail::parallel_rows(size.height, [&](int row_begin, int row_end) {
    for (int y = row_begin; y < row_end; ++y)
      for (int x = 0; x < size.width; ++x)
      {
        // Rectilinear un-projection up to positive scale; projection only
        // depends on the ray direction.
        const Vector3<Scalar> ray{Scalar(x) - c.x(), Scalar(y) - c.y(), f};
        const auto p = try_project<Scalar>(rotation * ray, source);
        if (!p)
          continue;
        const Scalar px = (*p).x();
        const Scalar py = (*p).y();
        if (px < -tol || py < -tol || px > max_x + tol || py > max_y + tol)
          continue;
        map.set(x, y, Vector2<Scalar>{std::clamp(px, Scalar(0), max_x),
                                      std::clamp(py, Scalar(0), max_y)});
      }
  });
  return map;
}

enum class Interpolation
{
  Bilinear,
  Nearest,
};

// Samples `source` at every lookup coordinate. Invalid entries get `fill`.
template <typename Scalar>
Image remap(const Image& source, const LookupMap<Scalar>& map, std::uint8_t fill = 0,
            Interpolation interpolation = Interpolation::Bilinear)
{
  if (source.resolution() != map.source_size())
    throw SizeMismatch{"source image size differs from the lookup map source size"};
  const Resolution size = map.size();
  const int channels = source.channels();
  Image out{size.width, size.height, channels, fill};
  const int w = source.width();
  const int h = source.height();
  const auto& coords = map.coordinates();
  const std::uint8_t* src = source.samples().data();
  std::uint8_t* dst = out.samples().data();

  detail::parallel_rows(size.height, [&](int row_begin, int row_end) {
    for (int y = row_begin; y < row_end; ++y)
      for (int x = 0; x < size.width; ++x)
      {
        const Eigen::Index i = map.index(x, y);
        const double sx = static_cast<double>(coords(0, i));
        const double sy = static_cast<double>(coords(1, i));
        if (std::isnan(sx) || std::isnan(sy))
          continue;
        std::uint8_t* d = dst + i * channels;
        if (interpolation == Interpolation::Nearest)
        {
          const int nx = std::clamp(static_cast<int>(std::lround(sx)), 0, w - 1);
          const int ny = std::clamp(static_cast<int>(std::lround(sy)), 0, h - 1);
          const std::uint8_t* s = src + (static_cast<std::size_t>(ny) * w + nx) * channels;
          std::copy(s, s + channels, d);
          continue;
        }
        const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, w - 1);
        const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, h - 1);
        const int x1 = std::min(x0 + 1, w - 1);
        const int y1 = std::min(y0 + 1, h - 1);
        const double fx = sx - x0;
        const double fy = sy - y0;
        const std::uint8_t* r0 = src + static_cast<std::size_t>(y0) * w * channels;
        const std::uint8_t* r1 = src + static_cast<std::size_t>(y1) * w * channels;
        for (int ch = 0; ch < channels; ++ch)
        {
          const double top = (1 - fx) * r0[x0 * channels + ch] + fx * r0[x1 * channels + ch];
          const double bottom = (1 - fx) * r1[x0 * channels + ch] + fx * r1[x1 * channels + ch];
          const double v = (1 - fy) * top + fy * bottom;
          d[ch] = static_cast<std::uint8_t>(std::clamp(v + 0.5, 0.0, 255.0));
        }
      }
  });
  return out;
}

template <typename Scalar>
Vector2<Scalar> apply_homography(const Matrix3<Scalar>& h, const Vector2<Scalar>& p)
{
  const Vector3<Scalar> q = h * p.homogeneous();
  return q.hnormalized();
}

// Homography taking pixels of rectilinear camera A (orientation rot_a) to
// rectilinear camera B (orientation rot_b), normalized to H(2,2) = 1 when
// that entry is non-zero.
template <typename Scalar>
Matrix3<Scalar> rectilinear_homography(const CameraIntrinsics<Scalar>& cam_a,
                                       const std::type_identity_t<Matrix3<Scalar>>& rot_a,
                                       const CameraIntrinsics<Scalar>& cam_b,
                                       const std::type_identity_t<Matrix3<Scalar>>& rot_b)
{
  if (cam_a.lens().kind() != LensKind::Rectilinear ||
      cam_b.lens().kind() != LensKind::Rectilinear)
    throw NotRectilinear{"homography mapping needs two rectilinear cameras"};
  const Matrix3<Scalar> k_a = cam_a.calibration_matrix();
  const Matrix3<Scalar> k_b = cam_b.calibration_matrix();
  Matrix3<Scalar> h = k_b * rot_b.transpose() * rot_a * k_a.inverse();
  if (h(2, 2) != Scalar(0))
    h /= h(2, 2);
  else
    h /= h.norm();
  return h;
}

template <typename Scalar>
Matrix3<Scalar> rectilinear_homography(const VirtualView<Scalar>& view_a,
                                       const VirtualView<Scalar>& view_b)
{
  return rectilinear_homography(view_a.intrinsics(), view_a.rotation(),
                                view_b.intrinsics(), view_b.rotation());
}

// Re-aims `view` so its optical axis passes through `target`, a pixel of the
// parent image. Without `gravity` the minimal rotation from +z to the target
// ray is used. With `gravity` (a direction in the parent camera frame) the
// view is rolled so that image +y points along gravity, which keeps standing
// people upright; when gravity is parallel to the target ray the minimal
// rotation is kept.
template <typename Scalar>
VirtualView<Scalar> focus_view(const VirtualView<Scalar>& view, const ImagePoint<Scalar>& target,
                               const CameraIntrinsics<Scalar>& parent,
                               const std::optional<Vector3<Scalar>>& gravity = std::nullopt)
{
  const Vector3<Scalar> axis = unproject(target, parent).normalized();
  Matrix3<Scalar> rotation =
      Eigen::Quaternion<Scalar>::FromTwoVectors(Vector3<Scalar>::UnitZ(), axis).toRotationMatrix();
  if (gravity)
  {
    const Vector3<Scalar> g = gravity->normalized();
    const Vector3<Scalar> down = g - g.dot(axis) * axis;
    if (down.norm() > Scalar(1e-9))
    {
      const Vector3<Scalar> y = down.normalized();
      const Vector3<Scalar> x = y.cross(axis);
      rotation.col(0) = x;
      rotation.col(1) = y;
      rotation.col(2) = axis;
    }
  }
  return view.with_rotation(rotation);
}

// Thread-safe cache of lookup maps keyed by parent camera, rotation
// (quantized to 1e-6 rad), view intrinsics and size.
template <typename Scalar = double>
class LookupMapCache
{
public:
  static constexpr double kRotationStep = 1e-6;

  std::shared_ptr<const LookupMap<Scalar>> get(const VirtualView<Scalar>& view,
                                               const CameraIntrinsics<Scalar>& source)
  {
    const Key key = make_key(view, source);
    {
      std::shared_lock lock{mutex_};
      if (auto it = maps_.find(key); it != maps_.end())
      {
        ++hits_;
        return it->second;
      }
    }
    auto built = std::make_shared<const LookupMap<Scalar>>(build_lookup_map(view, source));
    std::unique_lock lock{mutex_};
    auto [it, inserted] = maps_.emplace(key, std::move(built));
    if (!inserted)
      ++hits_;
    return it->second;
  }

  std::size_t size() const
  {
    std::shared_lock lock{mutex_};
    return maps_.size();
  }

  std::size_t hits() const { return hits_.load(); }

  void clear()
  {
    std::unique_lock lock{mutex_};
    maps_.clear();
  }

private:
  using Key = std::tuple<std::string, std::array<long long, 3>, std::array<double, 3>,
                         std::array<int, 2>, std::array<double, 4>, std::array<int, 2>>;

  static Key make_key(const VirtualView<Scalar>& view, const CameraIntrinsics<Scalar>& source)
  {
    const Eigen::AngleAxis<Scalar> aa{view.rotation()};
    const Vector3<Scalar> v = aa.angle() * aa.axis();
    std::array<long long, 3> rot{};
    for (int i = 0; i < 3; ++i)
      rot[static_cast<std::size_t>(i)] = std::llround(static_cast<double>(v(i)) / kRotationStep);
    const auto& vi = view.intrinsics();
    return Key{view.parent(),
               rot,
               {static_cast<double>(vi.lens().focal_length()),
                static_cast<double>(vi.principal_point().x()),
                static_cast<double>(vi.principal_point().y())},
               {vi.width(), vi.height()},
               {static_cast<double>(source.lens().kind()),
                static_cast<double>(source.lens().focal_length()),
                static_cast<double>(source.principal_point().x()),
                static_cast<double>(source.principal_point().y())},
               {source.width(), source.height()}};
  }

  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const LookupMap<Scalar>>> maps_;
  std::atomic<std::size_t> hits_{0};
};

// Binary map file: "FLKM", u32 width, u32 height, then width*height pairs
// of float32 source coordinates; invalid entries are NaN pairs. All values
// little-endian.
template <typename Scalar>
void write_lookup_map(const std::filesystem::path& path, const LookupMap<Scalar>& map)
{
  std::ofstream out{path, std::ios::binary};
  if (!out)
    throw InputError{"cannot write lookup map " + path.string()};
  auto put_u32 = [&out](std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  out.write("FLKM", 4);
  put_u32(static_cast<std::uint32_t>(map.size().width));
  put_u32(static_cast<std::uint32_t>(map.size().height));
  const auto& coords = map.coordinates();
  for (Eigen::Index i = 0; i < coords.cols(); ++i)
    for (int k = 0; k < 2; ++k)
      put_u32(std::bit_cast<std::uint32_t>(static_cast<float>(coords(k, i))));
}

// `source` is the size of the images the map samples from; it is not stored
// in the file.
template <typename Scalar = double>
LookupMap<Scalar> read_lookup_map(const std::filesystem::path& path, Resolution source)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
    throw ParseError{"cannot open lookup map " + path.string()};
  auto get_u32 = [&in, &path]() {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
      throw ParseError{"truncated lookup map " + path.string()};
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "FLKM", 4) != 0)
    throw ParseError{"not a lookup map file: " + path.string()};
  const std::uint32_t width = get_u32();
  const std::uint32_t height = get_u32();
  if (width == 0 || height == 0 || width > (1u << 16) || height > (1u << 16))
    throw ParseError{"implausible lookup map size in " + path.string()};
  LookupMap<Scalar> map{{static_cast<int>(width), static_cast<int>(height)}, source};
  auto& coords = map.coordinates();
  for (Eigen::Index i = 0; i < coords.cols(); ++i)
    for (int k = 0; k < 2; ++k)
      coords(k, i) = static_cast<Scalar>(std::bit_cast<float>(get_u32()));
  return map;
}

// Rotation of a virtual view relative to its parent from pan/tilt/roll
// angles in radians: yaw about the parent y axis, then pitch about x, then
// roll about the optical axis.
template <typename Scalar>
Matrix3<Scalar> rotation_from_yaw_pitch_roll(Scalar yaw, Scalar pitch, Scalar roll)
{
  using AngleAxis = Eigen::AngleAxis<Scalar>;
  return (AngleAxis{yaw, Vector3<Scalar>::UnitY()} * AngleAxis{pitch, Vector3<Scalar>::UnitX()} *
          AngleAxis{roll, Vector3<Scalar>::UnitZ()})
      .toRotationMatrix();
}

using View = VirtualView<double>;
using Map = LookupMap<double>;

} // namespace fsp
