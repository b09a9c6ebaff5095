#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "fsp/errors.hpp"

namespace fsp {

// The five classic radially symmetric projection functions.
enum class LensKind
{
  Rectilinear,
  Equidistant,
  Stereographic,
  Equisolid,
  Orthographic,
};

inline constexpr std::array<LensKind, 5> kAllLensKinds = {
    LensKind::Rectilinear, LensKind::Equidistant, LensKind::Stereographic,
    LensKind::Equisolid, LensKind::Orthographic};

inline std::string_view to_string(LensKind kind)
{
  switch (kind)
  {
  case LensKind::Rectilinear: return "rectilinear";
  case LensKind::Equidistant: return "equidistant";
  case LensKind::Stereographic: return "stereographic";
  case LensKind::Equisolid: return "equisolid";
  case LensKind::Orthographic: return "orthographic";
  }
  return "unknown";
}

inline std::optional<LensKind> lens_kind_from_string(std::string_view name)
{
  for (LensKind kind : kAllLensKinds)
    if (to_string(kind) == name)
      return kind;
  return std::nullopt;
}

// Maps the inclination angle theta of an incoming ray to the radial distance
// r_d of its image from the principal point, and back.
//
// Valid theta domains:
//   rectilinear    [0, pi/2 - 1e-9]
//   orthographic   [0, pi/2)
//   others         [0, pi)
template <typename Scalar = double>
class LensModel
{
public:
  // Margin below pi/2 past which the rectilinear tangent is rejected.
  static constexpr Scalar kRectilinearMargin = Scalar(1e-9);

  LensModel(LensKind kind, Scalar focal_length)
    : kind_{kind}
    , focal_length_{focal_length}
  {
    if (!(focal_length > Scalar(0)) || !std::isfinite(focal_length))
      throw DomainError{"focal length must be positive and finite"};
  }

  LensKind kind() const { return kind_; }
  Scalar focal_length() const { return focal_length_; }

  // Supremum of the theta domain (exclusive, except for the rectilinear
  // margin which is inclusive).
  Scalar theta_max() const
  {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    switch (kind_)
    {
    case LensKind::Rectilinear: return pi / 2 - kRectilinearMargin;
    case LensKind::Orthographic: return pi / 2;
    default: return pi;
    }
  }

  bool theta_in_domain(Scalar theta) const
  {
    if (!(theta >= Scalar(0)))
      return false;
    if (kind_ == LensKind::Rectilinear)
      return theta <= theta_max();
    return theta < theta_max();
  }

  // Supremum of representable radial distances; infinity when unbounded.
  Scalar rd_max() const
  {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar f = focal_length_;
    switch (kind_)
    {
    case LensKind::Equidistant: return f * pi;
    case LensKind::Equisolid: return 2 * f;
    case LensKind::Orthographic: return f;
    default: return std::numeric_limits<Scalar>::infinity();
    }
  }

  bool rd_in_domain(Scalar rd) const
  {
    return rd >= Scalar(0) && std::isfinite(rd) && rd < rd_max();
  }

  Scalar theta_to_rd(Scalar theta) const
  {
    if (!theta_in_domain(theta))
      throw DomainError{"inclination angle outside " +
                        std::string{to_string(kind_)} + " lens domain"};
    return theta_to_rd_unchecked(theta);
  }

  Scalar rd_to_theta(Scalar rd) const
  {
    if (!rd_in_domain(rd))
      throw DomainError{"radial distance outside " +
                        std::string{to_string(kind_)} + " lens range"};
    return rd_to_theta_unchecked(rd);
  }

  // Formula only, no domain check. Callers must have validated theta.
  Scalar theta_to_rd_unchecked(Scalar theta) const
  {
    using std::sin;
    using std::tan;
    const Scalar f = focal_length_;
    switch (kind_)
    {
    case LensKind::Rectilinear: return f * tan(theta);
    case LensKind::Equidistant: return f * theta;
    case LensKind::Stereographic: return 2 * f * tan(theta / 2);
    case LensKind::Equisolid: return 2 * f * sin(theta / 2);
    case LensKind::Orthographic: return f * sin(theta);
    }
    return Scalar(0);
  }

  Scalar rd_to_theta_unchecked(Scalar rd) const
  {
    using std::asin;
    using std::atan;
    const Scalar f = focal_length_;
    switch (kind_)
    {
    case LensKind::Rectilinear: return atan(rd / f);
    case LensKind::Equidistant: return rd / f;
    case LensKind::Stereographic: return 2 * atan(rd / (2 * f));
    case LensKind::Equisolid: return 2 * asin(rd / (2 * f));
    case LensKind::Orthographic: return asin(rd / f);
    }
    return Scalar(0);
  }

  template <typename Other>
  LensModel<Other> cast() const
  {
    return LensModel<Other>{kind_, static_cast<Other>(focal_length_)};
  }

  friend bool operator==(const LensModel&, const LensModel&) = default;

private:
  LensKind kind_;
  Scalar focal_length_;
};

using Lens = LensModel<double>;

} // namespace fsp
