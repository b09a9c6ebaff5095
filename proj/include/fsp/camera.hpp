#pragma once

#include <cmath>
#include <type_traits>
#include <optional>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fsp/errors.hpp"
#include "fsp/lens.hpp"

namespace fsp {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Matrix34 = Eigen::Matrix<Scalar, 3, 4>;

// Image points are pixel coordinates with implicit homogeneous w = 1. Pixel
// centers sit on integer coordinates.
template <typename Scalar>
using ImagePoint = Vector2<Scalar>;
// Object points are metric camera-frame coordinates; z is the optical axis.
template <typename Scalar>
using ObjectPoint = Vector3<Scalar>;

struct Resolution
{
  int width = 0;
  int height = 0;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

// Lens model, principal point and sensor size of one camera.
template <typename Scalar = double>
class CameraIntrinsics
{
public:
  CameraIntrinsics(LensModel<Scalar> lens, const Vector2<Scalar>& principal_point,
                   Resolution resolution)
    : lens_{lens}
    , principal_point_{principal_point}
    , resolution_{resolution}
  {
    if (resolution.width <= 0 || resolution.height <= 0)
      throw InputError{"camera resolution must be positive"};
    if (!principal_point.allFinite() || principal_point.x() < 0 ||
        principal_point.y() < 0 || principal_point.x() > resolution.width ||
        principal_point.y() > resolution.height)
      throw InputError{"principal point must lie inside the sensor"};
  }

  // Pinhole camera with a horizontal field of view `fov` (radians) and the
  // principal point at the image center.
  static CameraIntrinsics rectilinear(Scalar fov, Resolution resolution)
  {
    using std::tan;
    if (!(fov > Scalar(0)) || !(fov < std::numbers::pi_v<Scalar>))
      throw DomainError{"rectilinear field of view must lie in (0, 180) degrees"};
    const Scalar focal = Scalar(resolution.width) / 2 / tan(fov / 2);
    return CameraIntrinsics{
        LensModel<Scalar>{LensKind::Rectilinear, focal},
        Vector2<Scalar>{Scalar(resolution.width - 1) / 2,
                        Scalar(resolution.height - 1) / 2},
        resolution};
  }

  const LensModel<Scalar>& lens() const { return lens_; }
  const Vector2<Scalar>& principal_point() const { return principal_point_; }
  Resolution resolution() const { return resolution_; }
  int width() const { return resolution_.width; }
  int height() const { return resolution_.height; }

  // True when the pixel lies within [0, w-1] x [0, h-1], the region where all
  // four bilinear neighbors exist.
  bool contains(const ImagePoint<Scalar>& p) const
  {
    return p.x() >= 0 && p.y() >= 0 && p.x() <= Scalar(resolution_.width - 1) &&
           p.y() <= Scalar(resolution_.height - 1);
  }

  // Pinhole calibration matrix. Only meaningful for rectilinear lenses.
  Matrix3<Scalar> calibration_matrix() const
  {
    if (lens_.kind() != LensKind::Rectilinear)
      throw NotRectilinear{"calibration matrix requires a rectilinear lens"};
    const Scalar f = lens_.focal_length();
    Matrix3<Scalar> k;
    k << f, 0, principal_point_.x(),
         0, f, principal_point_.y(),
         0, 0, 1;
    return k;
  }

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;

private:
  LensModel<Scalar> lens_;
  Vector2<Scalar> principal_point_;
  Resolution resolution_;
};

// Rigid transform (rotation + translation). As a camera pose it maps camera
// coordinates to world coordinates.
template <typename Scalar = double>
class RigidPose
{
public:
  static constexpr double kOrthonormalTolerance = 1e-9;

  RigidPose()
    : rotation_{Matrix3<Scalar>::Identity()}
    , translation_{Vector3<Scalar>::Zero()}
  {}

  RigidPose(const Matrix3<Scalar>& rotation, const Vector3<Scalar>& translation)
    : rotation_{rotation}
    , translation_{translation}
  {
    if (!is_rotation(rotation))
      throw InputError{"pose rotation is not orthonormal with determinant +1"};
    if (!translation.allFinite())
      throw InputError{"pose translation is not finite"};
  }

  // From a homogeneous 4x4 matrix whose last row is (0, 0, 0, 1).
  static RigidPose from_matrix(const Matrix4<Scalar>& m)
  {
    using std::abs;
    const Eigen::Matrix<Scalar, 1, 4> last = m.row(3);
    if (abs(last(0)) > Scalar(kOrthonormalTolerance) ||
        abs(last(1)) > Scalar(kOrthonormalTolerance) ||
        abs(last(2)) > Scalar(kOrthonormalTolerance) ||
        abs(last(3) - Scalar(1)) > Scalar(kOrthonormalTolerance))
      throw InputError{"pose matrix last row must be (0, 0, 0, 1)"};
    return RigidPose{m.template topLeftCorner<3, 3>(), m.template topRightCorner<3, 1>()};
  }

  static bool is_rotation(const Matrix3<Scalar>& r)
  {
    using std::abs;
    if (!r.allFinite())
      return false;
    const Scalar err = (r.transpose() * r - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff();
    return err <= Scalar(kOrthonormalTolerance) &&
           abs(r.determinant() - Scalar(1)) <= Scalar(kOrthonormalTolerance);
  }

  const Matrix3<Scalar>& rotation() const { return rotation_; }
  const Vector3<Scalar>& translation() const { return translation_; }

  Matrix4<Scalar> matrix() const
  {
    Matrix4<Scalar> m = Matrix4<Scalar>::Identity();
    m.template topLeftCorner<3, 3>() = rotation_;
    m.template topRightCorner<3, 1>() = translation_;
    return m;
  }

  RigidPose inverse() const
  {
    RigidPose inv;
    inv.rotation_ = rotation_.transpose();
    inv.translation_ = -(inv.rotation_ * translation_);
    return inv;
  }

  Vector3<Scalar> operator*(const Vector3<Scalar>& p) const
  {
    return rotation_ * p + translation_;
  }

  RigidPose operator*(const RigidPose& other) const
  {
    RigidPose out;
    out.rotation_ = rotation_ * other.rotation_;
    out.translation_ = rotation_ * other.translation_ + translation_;
    return out;
  }

private:
  Matrix3<Scalar> rotation_;
  Vector3<Scalar> translation_;
};

// Inclination angle of a ray with the +z optical axis.
template <typename Scalar>
Scalar inclination(const ObjectPoint<Scalar>& o)
{
  using std::atan2;
  using std::hypot;
  return atan2(hypot(o.x(), o.y()), o.z());
}

// Projects a camera-frame point through the lens to distorted pixel
// coordinates, or nullopt when the ray is degenerate or outside the lens
// domain. The result may lie outside the sensor.
template <typename Scalar>
std::optional<ImagePoint<Scalar>> try_project(const ObjectPoint<Scalar>& o,
                                              const CameraIntrinsics<Scalar>& cam)
{
  using std::atan2;
  using std::hypot;
  if (!o.allFinite())
    return std::nullopt;
  const Scalar planar = hypot(o.x(), o.y());
  if (planar == Scalar(0))
  {
    // On the optical axis; theta is 0 in front and pi behind, which no
    // lens domain includes.
    if (o.z() > Scalar(0))
      return cam.principal_point();
    return std::nullopt;
  }
  const Scalar theta = atan2(planar, o.z());
  if (!cam.lens().theta_in_domain(theta))
    return std::nullopt;
  const Scalar rd = cam.lens().theta_to_rd_unchecked(theta);
  // (cos phi, sin phi) = (o_x, o_y) / planar
  return ImagePoint<Scalar>{cam.principal_point() + (rd / planar) * Vector2<Scalar>{o.x(), o.y()}};
}

template <typename Scalar>
ImagePoint<Scalar> project(const ObjectPoint<Scalar>& o, const CameraIntrinsics<Scalar>& cam)
{
  if (!o.allFinite())
    throw DegenerateInput{"object point is not finite"};
  if (o.isZero(Scalar(0)))
    throw DegenerateInput{"cannot project the camera center"};
  if (auto i = try_project(o, cam))
    return *i;
  throw DomainError{"object point outside the lens field of view"};
}

// Reverse projection of a pixel to the unit sphere, or nullopt when the pixel
// lies outside the lens image circle.
template <typename Scalar>
std::optional<ObjectPoint<Scalar>> try_unproject(const ImagePoint<Scalar>& i,
                                                 const CameraIntrinsics<Scalar>& cam)
{
  using std::cos;
  using std::sin;
  const Vector2<Scalar> n = i - cam.principal_point();
  const Scalar rd = n.norm();
  if (!cam.lens().rd_in_domain(rd))
    return std::nullopt;
  if (rd == Scalar(0))
    return ObjectPoint<Scalar>::UnitZ();
  const Scalar theta = cam.lens().rd_to_theta_unchecked(rd);
  const Scalar s = sin(theta) / rd;
  return ObjectPoint<Scalar>{s * n.x(), s * n.y(), cos(theta)};
}

template <typename Scalar>
ObjectPoint<Scalar> unproject(const ImagePoint<Scalar>& i, const CameraIntrinsics<Scalar>& cam)
{
  if (auto o = try_unproject(i, cam))
    return *o;
  throw DomainError{"image point outside the lens image circle"};
}

// Maps a pixel between two cameras sharing one optical center. Each rotation
// is the camera's orientation in a common frame.
template <typename Scalar>
ImagePoint<Scalar> map_point(const ImagePoint<Scalar>& i,
                             const CameraIntrinsics<Scalar>& src,
                             const std::type_identity_t<Matrix3<Scalar>>& src_rotation,
                             const CameraIntrinsics<Scalar>& dst,
                             const std::type_identity_t<Matrix3<Scalar>>& dst_rotation)
{
  const ObjectPoint<Scalar> ray = unproject(i, src);
  return project<Scalar>(dst_rotation.transpose() * (src_rotation * ray), dst);
}

using Intrinsics = CameraIntrinsics<double>;
using Pose = RigidPose<double>;

} // namespace fsp
