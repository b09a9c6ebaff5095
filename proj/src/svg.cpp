#include "fsp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fsp/errors.hpp"

namespace fsp {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v)
{
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

struct Axes
{
  double left;
  double top;
  double width;
  double height;
  double x0, x1, y0, y1;

  double x(double v) const { return left + (v - x0) / (x1 - x0) * width; }
  double y(double v) const { return top + height - (v - y0) / (y1 - y0) * height; }
};

void header(std::ostringstream& out, int w, int h)
{
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void frame(std::ostringstream& out, const Axes& a)
{
  out << "<rect x=\"" << fmt(a.left) << "\" y=\"" << fmt(a.top) << "\" width=\"" << fmt(a.width)
      << "\" height=\"" << fmt(a.height) << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void y_ticks(std::ostringstream& out, const Axes& a, double step)
{
  for (double v = std::ceil(a.y0 / step) * step; v <= a.y1 + 1e-9; v += step)
  {
    out << "<line x1=\"" << fmt(a.left - 4) << "\" x2=\"" << fmt(a.left + a.width) << "\" y1=\""
        << fmt(a.y(v)) << "\" y2=\"" << fmt(a.y(v)) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << fmt(a.left - 6) << "\" y=\"" << fmt(a.y(v) + 4)
        << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
}

double nice_step(double span)
{
  const double raw = span / 8;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag)
      return m * mag;
  return 10 * mag;
}

} // namespace

std::string limb_box_plot_svg(const std::vector<PersonStats>& stats, const BodyModel& model)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const PersonStats& p : stats)
    for (const LimbSummary& s : p.limbs)
      if (s.count > 0)
      {
        lo = std::min(lo, s.min);
        hi = std::max(hi, s.max);
      }
  if (!(lo <= hi))
  {
    lo = 0;
    hi = 1;
  }
  const double pad = std::max(0.02, 0.05 * (hi - lo));
  lo = std::max(0.0, lo - pad);
  hi += pad;

  const int w = 960;
  const int h = 480;
  const Axes a{60, 30, w - 80.0, h - 160.0, 0, double(kLimbCount), lo, hi};
  const int persons = std::max<int>(1, static_cast<int>(stats.size()));
  const double slot = a.width / kLimbCount;
  const double box_w = 0.8 * slot / persons;

  std::ostringstream out;
  header(out, w, h);
  y_ticks(out, a, nice_step(hi - lo));
  frame(out, a);
  out << "<text x=\"" << fmt(a.left + a.width / 2) << "\" y=\"18\" text-anchor=\"middle\">"
      << "Limb length (m)</text>\n";

  for (std::size_t p = 0; p < stats.size(); ++p)
  {
    const char* color = kPalette[p % std::size(kPalette)];
    for (int l = 0; l < kLimbCount; ++l)
    {
      const LimbSummary& s = stats[p].limbs[l];
      if (s.count == 0)
        continue;
      const double x = a.left + l * slot + 0.1 * slot + p * box_w;
      const double cx = x + box_w / 2;
      out << "<g stroke=\"" << color << "\" fill=\"none\">"
          << "<line x1=\"" << fmt(cx) << "\" x2=\"" << fmt(cx) << "\" y1=\"" << fmt(a.y(s.min))
          << "\" y2=\"" << fmt(a.y(s.max)) << "\"/>"
          << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(a.y(s.q3)) << "\" width=\"" << fmt(box_w)
          << "\" height=\"" << fmt(std::max(0.0, a.y(s.q1) - a.y(s.q3)))
          << "\" fill=\"white\"/>"
          << "<line x1=\"" << fmt(x) << "\" x2=\"" << fmt(x + box_w) << "\" y1=\""
          << fmt(a.y(s.median)) << "\" y2=\"" << fmt(a.y(s.median)) << "\" stroke-width=\"2\"/>"
          << "</g>\n";
    }
  }
  for (int l = 0; l < kLimbCount; ++l)
  {
    const double cx = a.left + (l + 0.5) * slot;
    const double ty = a.top + a.height + 10;
    out << "<text transform=\"translate(" << fmt(cx) << ',' << fmt(ty)
        << ") rotate(45)\" text-anchor=\"start\">" << model.limb_name(l) << "</text>\n";
  }
  for (std::size_t p = 0; p < stats.size(); ++p)
    out << "<text x=\"" << fmt(a.left + a.width - 100) << "\" y=\"" << 50 + 16 * p << "\" fill=\""
        << kPalette[p % std::size(kPalette)] << "\">person " << stats[p].person_id << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<LensCurve> sample_lens_curves(int samples, double rd_limit)
{
  std::vector<LensCurve> out;
  for (LensKind kind : kAllLensKinds)
  {
    const Lens lens{kind, 1.0};
    LensCurve c{kind, {}, {}};
    for (int k = 0; k < samples; ++k)
    {
      const double theta = std::numbers::pi * k / samples;
      if (!lens.theta_in_domain(theta))
        break;
      const double rd = lens.theta_to_rd(theta);
      if (rd > rd_limit)
        break;
      c.theta.push_back(theta);
      c.rd_over_f.push_back(rd);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string lens_curves_svg(const std::vector<LensCurve>& curves)
{
  const int w = 640;
  const int h = 440;
  const Axes a{60, 30, w - 200.0, h - 80.0, 0, 180, 0, 4};
  std::ostringstream out;
  header(out, w, h);
  y_ticks(out, a, 0.5);
  for (int deg = 0; deg <= 180; deg += 30)
    out << "<text x=\"" << fmt(a.x(deg)) << "\" y=\"" << fmt(a.top + a.height + 16)
        << "\" text-anchor=\"middle\">" << deg << "</text>\n";
  frame(out, a);
  out << "<text x=\"" << fmt(a.left + a.width / 2) << "\" y=\"" << h - 14
      << "\" text-anchor=\"middle\">inclination (deg)</text>\n"
      << "<text x=\"16\" y=\"" << fmt(a.top + a.height / 2) << "\" transform=\"rotate(-90 16 "
      << fmt(a.top + a.height / 2) << ")\" text-anchor=\"middle\">r_d / f</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i)
  {
    const LensCurve& c = curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < c.theta.size(); ++k)
      out << fmt(a.x(c.theta[k] * 180 / std::numbers::pi)) << ',' << fmt(a.y(c.rd_over_f[k]))
          << ' ';
    out << "\"/>\n"
        << "<text x=\"" << fmt(a.left + a.width + 12) << "\" y=\"" << fmt(a.top + 16 + 18 * i)
        << "\" fill=\"" << color << "\">" << to_string(c.kind) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out{path, std::ios::binary};
  if (!out)
    throw InputError{"cannot write " + path.string()};
  out << text;
  if (!out)
    throw InputError{"failed writing " + path.string()};
}

} // namespace fsp
