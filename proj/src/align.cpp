#include "isarff/align.hpp"

#include <algorithm>
#include <limits>

#include "isarff/imgproc.hpp"
#include "isarff/parallel.hpp"

namespace isarff {

Eigen::Vector2d exact_cos_sin(double theta)
{
  const double quarter = kPi / 2.0;
  const double k = std::round(theta / quarter);
  if (std::abs(theta - k * quarter) < 1e-12) {
    switch (((static_cast<long long>(k) % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
  }
  return {std::cos(theta), std::sin(theta)};
}

Affine2 compose_affine(const AffineParams& p)
{
  const Eigen::Vector2d cs = exact_cos_sin(p.theta);
  Eigen::Matrix2d scale, shear, rotation;
  scale << p.cx, 0.0, 0.0, p.cy;
  if (p.scale_axis != 0.0) {
    const Eigen::Vector2d ab = exact_cos_sin(p.scale_axis);
    Eigen::Matrix2d axis;
    axis << ab[0], -ab[1], ab[1], ab[0];
    scale = axis * scale * axis.transpose();
  }
  shear << 1.0, p.dx, p.dy, 1.0;
  rotation << cs[0], -cs[1], cs[1], cs[0];
  Affine2 t;
  t.A = scale * shear * rotation;
  t.S = {p.sx, p.sy};
  if (std::abs(t.A.determinant()) < 1e-12) throw DegenerateTransformError("affine parameters give a singular matrix");
  return t;
}

IntensityFrame apply_affine(const IntensityFrame& frame, const AffineParams& p, Interp interp, double fill_db)
{
  IntensityFrame out = frame;
  out.pixels = warp_affine(frame.pixels, compose_affine(p), interp, fill_db);
  return out;
}

Mask segment_target(const IntensityFrame& frame, const SegmentOptions& options)
{
  const ImageD& v = frame.pixels;
  if (v.size() == 0) throw SegmentationError("empty frame");
  const double lo = v.minCoeff(), hi = v.maxCoeff();
  if (!(hi > lo)) throw SegmentationError("frame " + std::to_string(frame.frame_index) + " is uniform");
  Mask m = otsu_mask(v, Histogram{lo, hi, 256});
  m = remove_small_components(close3(m), options.min_area);
  if ((m.cast<int>() == 0).all())
    throw SegmentationError("no target found in frame " + std::to_string(frame.frame_index));
  return m;
}

namespace {

struct MaskMoments
{
  double area{0.0};
  Eigen::Vector2d centroid{Eigen::Vector2d::Zero()};
  double mu20{0.0}, mu02{0.0}, mu11{0.0};
};

MaskMoments moments(const Mask& mask)
{
  const auto frame = PixelFrame::of(mask.rows(), mask.cols());
  MaskMoments m;
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      if (mask(r, c)) {
        m.area += 1.0;
        m.centroid += frame.to_centred(static_cast<double>(c), static_cast<double>(r));
      }
  if (m.area == 0.0) return m;
  m.centroid /= m.area;
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      if (mask(r, c)) {
        const Eigen::Vector2d d = frame.to_centred(static_cast<double>(c), static_cast<double>(r)) - m.centroid;
        m.mu20 += d.x() * d.x();
        m.mu02 += d.y() * d.y();
        m.mu11 += d.x() * d.y();
      }
  return m;
}

// Side lengths of the uniform rectangle with the mask's second moments along and
// across the direction alpha.
Eigen::Vector2d equivalent_extent(const MaskMoments& m, double alpha)
{
  const Eigen::Vector2d u = exact_cos_sin(alpha);
  const double along = (m.mu20 * u.x() * u.x() + 2.0 * m.mu11 * u.x() * u.y() + m.mu02 * u.y() * u.y()) / m.area;
  const double across = (m.mu20 * u.y() * u.y() - 2.0 * m.mu11 * u.x() * u.y() + m.mu02 * u.x() * u.x()) / m.area;
  return {std::sqrt(12.0 * along), std::sqrt(12.0 * across)};
}

// Wraps into (-pi/2, pi/2].
double wrap_half_turn(double a)
{
  while (a <= -kPi / 2) a += kPi;
  while (a > kPi / 2) a -= kPi;
  return a;
}

struct FrameGeometry
{
  bool segmented{false};
  Mask mask;
  MaskMoments m;
  std::optional<double> axis;
};

} // namespace

double estimate_attitude_axis(const Mask& mask)
{
  const MaskMoments m = moments(mask);
  if (m.area == 0.0) throw InsufficientDataError("attitude axis of an empty mask");
  const double diff = m.mu20 - m.mu02;
  const double anis = std::sqrt(diff * diff + 4.0 * m.mu11 * m.mu11);
  if (anis <= 1e-9 * (m.mu20 + m.mu02))
    throw AmbiguousAxisError("mask second moments are isotropic");
  return 0.5 * std::atan2(2.0 * m.mu11, diff);
}

AlignedSequence align_sequence(const std::vector<IntensityFrame>& frames, const AlignOptions& options)
{
  if (frames.size() < 2) throw InsufficientDataError("alignment needs at least two frames");
  if (options.enable_shear)
    throw ConfigError("enable_shear: no shear estimation rule is available; leave it disabled");
  for (const auto& f : frames)
    if (f.pixels.rows() != frames.front().pixels.rows() || f.pixels.cols() != frames.front().pixels.cols())
      throw ShapeMismatchError("alignment needs equally sized frames");

  std::vector<FrameGeometry> geo(frames.size());
  parallel_for(frames.size(), options.threads, [&](std::size_t i) {
    try {
      geo[i].mask = segment_target(frames[i], {options.min_area});
      geo[i].segmented = true;
    } catch (const SegmentationError&) {
      return;
    }
    geo[i].m = moments(geo[i].mask);
    try {
      geo[i].axis = estimate_attitude_axis(geo[i].mask);
    } catch (const AmbiguousAxisError&) {
      geo[i].axis.reset();
    }
  });

  int ref = -1;
  if (options.reference_index) {
    ref = *options.reference_index;
    if (ref < 0 || ref >= static_cast<int>(frames.size())) throw ConfigError("reference_index out of range");
  } else {
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (geo[i].segmented && (ref < 0 || geo[i].m.area > geo[ref].m.area)) ref = static_cast<int>(i);
  }
  if (ref < 0 || !geo[ref].segmented)
    throw SegmentationError("reference frame could not be segmented");

  const FrameGeometry& rg = geo[ref];

  AlignedSequence out;
  out.reference_index = ref;
  out.frames.resize(frames.size());
  out.params.resize(frames.size());
  out.status.resize(frames.size());
  parallel_for(frames.size(), options.threads, [&](std::size_t i) {
    const FrameGeometry& g = geo[i];
    if (!g.segmented) {
      out.frames[i] = frames[i];
      out.status[i] = FrameStatus::unaligned;
      return;
    }
    AffineParams p;
    if (static_cast<int>(i) != ref) {
      const bool oriented = g.axis && rg.axis;
      p.theta = oriented ? wrap_half_turn(*rg.axis - *g.axis) : 0.0;
      p.scale_axis = oriented ? *rg.axis : 0.0;
      const Eigen::Vector2d ref_extent = equivalent_extent(rg.m, p.scale_axis);
      const Eigen::Vector2d extent = equivalent_extent(g.m, oriented ? *g.axis : 0.0);
      p.cx = extent.x() > 0.0 && ref_extent.x() > 0.0 ? ref_extent.x() / extent.x() : 1.0;
      p.cy = extent.y() > 0.0 && ref_extent.y() > 0.0 ? ref_extent.y() / extent.y() : 1.0;
      const Affine2 linear = compose_affine(p);
      const Eigen::Vector2d s = rg.m.centroid - linear.A * g.m.centroid;
      p.sx = s.x();
      p.sy = s.y();
    }
    out.params[i] = p;
    out.frames[i] = static_cast<int>(i) == ref ? frames[i] : apply_affine(frames[i], p, options.interp, options.fill_db);
    out.status[i] = FrameStatus::ok;
  });
  return out;
}

} // namespace isarff
