#include "fsp/image.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include <png.h>

#include "fsp/errors.hpp"

namespace fsp {

Image::Image(int width, int height, int channels, std::uint8_t value)
  : width_{width}
  , height_{height}
  , channels_{channels}
{
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
    throw InputError{"image must have positive size and 1 or 3 channels"};
  samples_.assign(static_cast<std::size_t>(width) * height * channels, value);
}

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> samples)
  : width_{width}
  , height_{height}
  , channels_{channels}
  , samples_{std::move(samples)}
{
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
    throw InputError{"image must have positive size and 1 or 3 channels"};
  if (samples_.size() != static_cast<std::size_t>(width) * height * channels)
    throw SizeMismatch{"image buffer length does not match its dimensions"};
}

namespace {

Image read_png(const std::filesystem::path& path)
{
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw ParseError{"cannot read PNG " + path.string() + ": " + png.message};

  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<std::uint8_t> samples(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, samples.data(), 0, nullptr))
  {
    std::string msg = png.message;
    png_image_free(&png);
    throw ParseError{"cannot decode PNG " + path.string() + ": " + msg};
  }
  return Image{static_cast<int>(png.width), static_cast<int>(png.height), channels,
               std::move(samples)};
}

// Skips whitespace and '#' comments between PNM header tokens.
int read_pnm_int(std::istream& in)
{
  for (;;)
  {
    const int c = in.peek();
    if (c == '#')
    {
      std::string line;
      std::getline(in, line);
    }
    else if (c != EOF && std::isspace(c))
      in.get();
    else
      break;
  }
  int value = -1;
  if (!(in >> value))
    throw ParseError{"malformed PNM header"};
  return value;
}

Image read_pnm(const std::filesystem::path& path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
    throw ParseError{"cannot open " + path.string()};
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  int channels = 0;
  if (magic == "P5")
    channels = 1;
  else if (magic == "P6")
    channels = 3;
  else
    throw ParseError{"unsupported PNM variant in " + path.string()};

  const int width = read_pnm_int(in);
  const int height = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (width <= 0 || height <= 0 || maxval != 255)
    throw ParseError{"only 8-bit PNM files are supported: " + path.string()};
  in.get(); // single whitespace before raster

  std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
  if (in.gcount() != static_cast<std::streamsize>(samples.size()))
    throw ParseError{"truncated PNM raster in " + path.string()};
  return Image{width, height, channels, std::move(samples)};
}

} // namespace

Image read_image(const std::filesystem::path& path)
{
  std::ifstream probe{path, std::ios::binary};
  if (!probe)
    throw ParseError{"cannot open image " + path.string()};
  unsigned char head[8] = {};
  probe.read(reinterpret_cast<char*>(head), 8);
  if (probe.gcount() == 8 && png_sig_cmp(head, 0, 8) == 0)
    return read_png(path);
  if (head[0] == 'P' && (head[1] == '5' || head[1] == '6'))
    return read_pnm(path);
  throw ParseError{"unrecognized image format: " + path.string()};
}

void write_png(const std::filesystem::path& path, const Image& image)
{
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.samples().data(), 0, nullptr))
    throw InputError{"cannot write PNG " + path.string() + ": " + png.message};
}

void write_pnm(const std::filesystem::path& path, const Image& image)
{
  std::ofstream out{path, std::ios::binary};
  if (!out)
    throw InputError{"cannot write " + path.string()};
  out << (image.channels() == 3 ? "P6" : "P5") << '\n'
      << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.samples().data()),
            static_cast<std::streamsize>(image.samples().size()));
}

void write_image(const std::filesystem::path& path, const Image& image)
{
  const auto ext = path.extension().string();
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm")
    write_pnm(path, image);
  else
    write_png(path, image);
}

} // namespace fsp
