#include "fsp/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fsp {

std::string BodyModel::limb_name(int limb) const
{
  const Limb& l = limbs.at(limb);
  return std::string{joints[l.from]} + "-" + std::string{joints[l.to]};
}

int BodyModel::joint_index(std::string_view name) const
{
  const auto it = std::find(joints.begin(), joints.end(), name);
  return it == joints.end() ? -1 : static_cast<int>(it - joints.begin());
}

int Skeleton2D::joint_count() const
{
  return static_cast<int>(std::count_if(joints.begin(), joints.end(),
                                        [](const auto& j) { return j.has_value(); }));
}

int Skeleton3D::joint_count() const
{
  return static_cast<int>(std::count_if(joints.begin(), joints.end(),
                                        [](const auto& j) { return j.has_value(); }));
}

std::vector<JointCorrespondence> match_joints(const Skeleton2D& a, const Skeleton2D& b,
                                              double min_conf)
{
  if (a.person_id != b.person_id)
    throw PersonMismatch{"person " + std::to_string(a.person_id) + " matched against person " +
                         std::to_string(b.person_id)};
  if (a.frame_index != b.frame_index)
    throw InputError{"frame " + std::to_string(a.frame_index) + " matched against frame " +
                     std::to_string(b.frame_index)};

  std::vector<JointCorrespondence> out;
  for (int j = 0; j < kJointCount; ++j)
  {
    const auto& ja = a.joints[j];
    const auto& jb = b.joints[j];
    if (!ja || !jb)
      continue;
    const double conf = std::min(ja->confidence, jb->confidence);
    if (conf < min_conf)
      continue;
    out.push_back({j, {ja->position, jb->position, conf}});
  }
  return out;
}

Skeleton3D reconstruct_skeleton(std::span<const JointCorrespondence> corrs,
                                const ProjectionMatrix& p_a, const ProjectionMatrix& p_b,
                                double max_residual)
{
  Skeleton3D s;
  for (const JointCorrespondence& c : corrs)
  {
    try
    {
      const Eigen::Vector3d x = triangulate_dlt(c.points, p_a, p_b);
      const auto [ra, rb] = reprojection_error(x, c.points, p_a, p_b);
      const double residual = std::max(ra, rb);
      if (!(residual <= max_residual))
        continue;
      s.joints.at(c.joint) = Joint3D{x, residual};
    }
    catch (const GeometryError&)
    {
    }
  }
  return s;
}

std::array<std::optional<double>, kLimbCount> limb_lengths(const Skeleton3D& s,
                                                           const BodyModel& model)
{
  std::array<std::optional<double>, kLimbCount> out{};
  for (int l = 0; l < kLimbCount; ++l)
  {
    const auto& a = s.joints[model.limbs[l].from];
    const auto& b = s.joints[model.limbs[l].to];
    if (a && b)
      out[l] = (a->position - b->position).norm();
  }
  return out;
}

namespace {

// Linear interpolation between order statistics of sorted data at p in [0,1].
double quantile(const std::vector<double>& sorted, double p)
{
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

LimbSummary summarize(std::vector<double> samples)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  LimbSummary out{0, nan, nan, nan, nan, nan, nan, nan};
  if (samples.empty())
    return out;
  // Sorting first makes every reduction independent of input order.
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  out.count = samples.size();
  out.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples)
    ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / n);
  out.min = samples.front();
  out.max = samples.back();
  // The rounded mean of equal samples can differ from their common value.
  if (out.min == out.max)
  {
    out.mean = out.min;
    out.stddev = 0.0;
  }
  out.q1 = quantile(samples, 0.25);
  out.median = quantile(samples, 0.5);
  out.q3 = quantile(samples, 0.75);
  return out;
}

StatsAccumulator::StatsAccumulator(const BodyModel& model) : model_{model} {}

void StatsAccumulator::add(const Skeleton3D& s)
{
  PersonSamples& p = persons_[s.person_id];
  ++p.frames;
  const auto lengths = limb_lengths(s, model_);
  for (int l = 0; l < kLimbCount; ++l)
    if (lengths[l])
      p.lengths[l].push_back(*lengths[l]);
}

void StatsAccumulator::merge(const StatsAccumulator& other)
{
  for (const auto& [id, theirs] : other.persons_)
  {
    PersonSamples& mine = persons_[id];
    mine.frames += theirs.frames;
    for (int l = 0; l < kLimbCount; ++l)
      mine.lengths[l].insert(mine.lengths[l].end(), theirs.lengths[l].begin(),
                             theirs.lengths[l].end());
  }
}

std::vector<PersonStats> StatsAccumulator::result() const
{
  std::vector<PersonStats> out;
  for (const auto& [id, p] : persons_)
  {
    PersonStats ps;
    ps.person_id = id;
    ps.frames = p.frames;
    for (int l = 0; l < kLimbCount; ++l)
    {
      ps.limbs[l] = summarize(p.lengths[l]);
      ps.frequency[l] = p.frames == 0 ? 0.0
                                      : static_cast<double>(p.lengths[l].size()) /
                                            static_cast<double>(p.frames);
    }
    out.push_back(ps);
  }
  return out;
}

std::vector<PersonStats> accumulate_stats(std::span<const Skeleton3D> sequence,
                                          const BodyModel& model)
{
  StatsAccumulator acc{model};
  for (const Skeleton3D& s : sequence)
    acc.add(s);
  return acc.result();
}

} // namespace fsp
