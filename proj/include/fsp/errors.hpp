#pragma once

#include <stdexcept>
#include <string>

namespace fsp {

// Base of every error raised by the library. Geometry errors map to CLI exit
// code 3, input errors to exit code 2.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

class InputError : public Error
{
public:
  using Error::Error;
};

// Angle or radius outside the valid domain of a lens model.
class DomainError : public GeometryError
{
public:
  using GeometryError::GeometryError;
};

// Zero-length ray and similar.
class DegenerateInput : public GeometryError
{
public:
  using GeometryError::GeometryError;
};

// Coincident camera centers or parallel rays in triangulation.
class DegenerateGeometry : public GeometryError
{
public:
  using GeometryError::GeometryError;
};

class BehindCamera : public GeometryError
{
public:
  using GeometryError::GeometryError;
};

class NotRectilinear : public GeometryError
{
public:
  using GeometryError::GeometryError;
};

class SingularPose : public GeometryError
{
public:
  using GeometryError::GeometryError;
};

class SizeMismatch : public InputError
{
public:
  using InputError::InputError;
};

class PersonMismatch : public InputError
{
public:
  using InputError::InputError;
};

// Malformed calibration, keypoint, config or image file.
class ParseError : public InputError
{
public:
  using InputError::InputError;
};

} // namespace fsp
