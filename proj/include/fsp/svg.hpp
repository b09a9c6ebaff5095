#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fsp/lens.hpp"
#include "fsp/skeleton.hpp"

namespace fsp {

// One box per limb and person: whiskers at min/max, box at the quartiles,
// a bar at the median. Limbs without samples are left blank.
std::string limb_box_plot_svg(const std::vector<PersonStats>& stats,
                              const BodyModel& model = kCoco18);

struct LensCurve
{
  LensKind kind;
  std::vector<double> theta;
  std::vector<double> rd_over_f;
};

// r_d/f sampled at `samples` evenly spaced angles over [0, min(theta_max, pi)),
// stopping once r_d/f exceeds `rd_limit`.
std::vector<LensCurve> sample_lens_curves(int samples, double rd_limit = 4.0);

std::string lens_curves_svg(const std::vector<LensCurve>& curves);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace fsp
