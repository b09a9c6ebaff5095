#pragma once

#include <cmath>
#include <type_traits>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "fsp/camera.hpp"
#include "fsp/errors.hpp"
#include "fsp/view_synthesis.hpp"

namespace fsp {

// Two measured image points of the same world point, one per rectilinear
// view. Confidence is carried for bookkeeping only.
template <typename Scalar = double>
struct Correspondence
{
  ImagePoint<Scalar> a;
  ImagePoint<Scalar> b;
  Scalar confidence = Scalar(1);
};

// P = K [I 0] [R^T 0; 0 1] W^-1 for a rectilinear camera with intrinsics K,
// orientation R relative to its parent camera, and parent world pose W.
template <typename Scalar>
Matrix34<Scalar> projection_matrix(const CameraIntrinsics<Scalar>& intrinsics,
                                   const std::type_identity_t<Matrix3<Scalar>>& view_rotation,
                                   const RigidPose<Scalar>& world_pose)
{
  const Matrix3<Scalar> k = intrinsics.calibration_matrix();
  const RigidPose<Scalar> world_to_parent = world_pose.inverse();
  Matrix34<Scalar> extrinsic;
  extrinsic.template leftCols<3>() = view_rotation.transpose() * world_to_parent.rotation();
  extrinsic.col(3) = view_rotation.transpose() * world_to_parent.translation();
  return k * extrinsic;
}

template <typename Scalar>
Matrix34<Scalar> projection_matrix(const VirtualView<Scalar>& view,
                                   const RigidPose<Scalar>& world_pose)
{
  return projection_matrix(view.intrinsics(), view.rotation(), world_pose);
}

// Projects a world point; returns the pixel and the projective depth w.
template <typename Scalar>
std::pair<ImagePoint<Scalar>, Scalar> project_world(const Matrix34<Scalar>& p,
                                                    const Vector3<Scalar>& x)
{
  const Vector3<Scalar> h = p * x.homogeneous();
  return {h.template head<2>() / h(2), h(2)};
}

// Camera center: the right null vector of P, dehomogenized.
template <typename Scalar>
Vector3<Scalar> camera_center(const Matrix34<Scalar>& p)
{
  const Matrix3<Scalar> m = p.template leftCols<3>();
  return -m.inverse() * p.col(3);
}

// Signed depth of x in front of camera P, in units of P's third row. Positive
// means in front of the camera.
template <typename Scalar>
Scalar point_depth(const Matrix34<Scalar>& p, const Vector3<Scalar>& x)
{
  const Scalar w = (p * x.homogeneous())(2);
  const Scalar det = p.template leftCols<3>().determinant();
  return det < Scalar(0) ? -w : w;
}

// Thresholds used to reject degenerate two-view configurations.
struct DltTolerances
{
  // Camera centers closer than this (relative to their magnitude, floor 1)
  // are considered coincident.
  double center_separation = 1e-12;
  // sigma_3 / sigma_1 at or below this means a null space of dimension >= 2.
  double rank_deficiency = 1e-12;
  // sigma_4 / sigma_3 above 1 - this means the smallest singular vector is
  // not isolated.
  double singular_gap = 1e-9;
  // |w| / ||x|| at or below this means the rays meet at infinity.
  double at_infinity = 1e-12;
  // Depth reweighting passes after the plain solve (0 gives plain DLT).
  int reweight_passes = 3;
};

// Linear triangulation: stacks (x p_2 - p_0, y p_2 - p_1) for both views into
// A (4x4) and takes the right singular vector of the smallest singular value.
//
// Conditioning: world coordinates are expressed relative to the midpoint of
// the two camera centers in units of half the baseline, and each P is scaled
// so the first three entries of its last row have unit norm. Each residual of
// A is then the pixel error times the point depth. Centering and scaling the
// image coordinates would leave the minimizer unchanged (one point per view),
// so it is not done. The world normalization makes the result equivariant
// under rigid motions of the rig.
template <typename Scalar>
Vector3<Scalar> triangulate_dlt(const Correspondence<Scalar>& corr, const Matrix34<Scalar>& p_a,
                                const Matrix34<Scalar>& p_b, const DltTolerances& tol = {})
{
  using std::abs;
  if (!corr.a.allFinite() || !corr.b.allFinite())
    throw DegenerateInput{"correspondence image points must be finite"};

  const Matrix3<Scalar> m_a = p_a.template leftCols<3>();
  const Matrix3<Scalar> m_b = p_b.template leftCols<3>();
  if (abs(m_a.determinant()) == Scalar(0) || abs(m_b.determinant()) == Scalar(0))
    throw DegenerateGeometry{"projection matrix has a singular left block"};
  const Vector3<Scalar> c_a = camera_center(p_a);
  const Vector3<Scalar> c_b = camera_center(p_b);
  const Scalar scale = std::max({Scalar(1), c_a.norm(), c_b.norm()});
  if ((c_a - c_b).norm() <= Scalar(tol.center_separation) * scale)
    throw DegenerateGeometry{"camera centers coincide"};

  const Vector3<Scalar> origin = (c_a + c_b) / 2;
  const Scalar unit = (c_a - c_b).norm() / 2;
  Matrix4<Scalar> denormalize = Matrix4<Scalar>::Identity();
  denormalize.template topLeftCorner<3, 3>() *= unit;
  denormalize.template topRightCorner<3, 1>() = origin;
  const Matrix34<Scalar> q_a = p_a * denormalize / p_a.row(2).template head<3>().norm();
  const Matrix34<Scalar> q_b = p_b * denormalize / p_b.row(2).template head<3>().norm();

  Eigen::Matrix<Scalar, 4, 4> a;
  a.row(0) = corr.a.x() * q_a.row(2) - q_a.row(0);
  a.row(1) = corr.a.y() * q_a.row(2) - q_a.row(1);
  a.row(2) = corr.b.x() * q_b.row(2) - q_b.row(0);
  a.row(3) = corr.b.y() * q_b.row(2) - q_b.row(1);

  const Eigen::JacobiSVD<Eigen::Matrix<Scalar, 4, 4>> svd{a, Eigen::ComputeFullV};
  const auto& sigma = svd.singularValues();
  if (sigma(2) <= Scalar(tol.rank_deficiency) * sigma(0))
    throw DegenerateGeometry{"triangulation system has no isolated solution"};
  if (sigma(3) / sigma(2) > Scalar(1) - Scalar(tol.singular_gap))
    throw DegenerateGeometry{"smallest singular values are not separated"};

  Vector4<Scalar> x = svd.matrixV().col(3);
  if (abs(x(3)) <= Scalar(tol.at_infinity) * x.norm())
    throw DegenerateGeometry{"rays are parallel"};

  // Each view's rows carry the point depth as a factor; dividing it out with
  // the current estimate turns the algebraic error into image error.
  for (int pass = 0; pass < tol.reweight_passes; ++pass)
  {
    const Vector4<Scalar> h = x / x(3);
    const Scalar d_a = q_a.row(2).dot(h);
    const Scalar d_b = q_b.row(2).dot(h);
    if (!(d_a > Scalar(0)) || !(d_b > Scalar(0)))
      break;
    Eigen::Matrix<Scalar, 4, 4> w = a;
    w.template topRows<2>() /= d_a;
    w.template bottomRows<2>() /= d_b;
    const Eigen::JacobiSVD<Eigen::Matrix<Scalar, 4, 4>> refined{w, Eigen::ComputeFullV};
    const Vector4<Scalar> next = refined.matrixV().col(3);
    if (abs(next(3)) <= Scalar(tol.at_infinity) * next.norm())
      break;
    x = next;
  }
  const Vector3<Scalar> point = origin + unit * (x.template head<3>() / x(3));

  if (!(point_depth(p_a, point) > Scalar(0)) || !(point_depth(p_b, point) > Scalar(0)))
    throw BehindCamera{"triangulated point lies behind a camera"};
  return point;
}

// Pixel distance between the reprojection of x and the measured point, per
// view.
template <typename Scalar>
std::pair<Scalar, Scalar> reprojection_error(const Vector3<Scalar>& x,
                                             const Correspondence<Scalar>& corr,
                                             const Matrix34<Scalar>& p_a,
                                             const Matrix34<Scalar>& p_b)
{
  if (!x.allFinite())
    throw DegenerateInput{"world point must be finite"};
  if (!(point_depth(p_a, x) > Scalar(0)) || !(point_depth(p_b, x) > Scalar(0)))
    throw BehindCamera{"point lies behind a camera"};
  const auto [ia, wa] = project_world(p_a, x);
  const auto [ib, wb] = project_world(p_b, x);
  return {(ia - corr.a).norm(), (ib - corr.b).norm()};
}

using ProjectionMatrix = Matrix34<double>;

} // namespace fsp
