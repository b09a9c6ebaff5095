#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fsp/camera.hpp"

namespace fsp {

// 8-bit interleaved image, row-major, 1 (gray) or 3 (RGB) channels.
class Image
{
public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t value = 0);
  Image(int width, int height, int channels, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  Resolution resolution() const { return {width_, height_}; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t& at(int x, int y, int c = 0)
  {
    return samples_[index(x, y, c)];
  }
  std::uint8_t at(int x, int y, int c = 0) const
  {
    return samples_[index(x, y, c)];
  }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  friend bool operator==(const Image&, const Image&) = default;

private:
  std::size_t index(int x, int y, int c) const
  {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

// Reads PNG (8-bit gray/RGB; palette, alpha and 16-bit inputs are
// converted) or binary PGM/PPM. Throws ParseError.
Image read_image(const std::filesystem::path& path);

// Writes PNG unless the extension is .pgm/.ppm, in which case binary PNM.
void write_image(const std::filesystem::path& path, const Image& image);

void write_png(const std::filesystem::path& path, const Image& image);
void write_pnm(const std::filesystem::path& path, const Image& image);

} // namespace fsp
