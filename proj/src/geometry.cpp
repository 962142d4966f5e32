#include "recist_kit/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace recist_kit {

namespace {

constexpr double kGeomTol = 1e-6;

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

RecistAnnotation normalize_recist(Point2 p1a, Point2 p1b, Point2 p2a, Point2 p2b) {
  if (!finite(p1a) || !finite(p1b) || !finite(p2a) || !finite(p2b))
    throw ZeroLengthDiameter("non-finite endpoint coordinates");

  const double len1 = length(p1b - p1a);
  const double len2 = length(p2b - p2a);
  if (len1 < kGeomTol || len2 < kGeomTol)
    throw ZeroLengthDiameter("diameter segment shorter than 1e-6 px");

  Vec2 d1 = p1b - p1a;
  Vec2 d2 = p2b - p2a;
  d1.x /= len1;
  d1.y /= len1;
  d2.x /= len2;
  d2.y /= len2;
  if (std::abs(cross(d1, d2)) < kGeomTol)
    throw ParallelDiameters("diameter directions are parallel");

  RecistAnnotation r;
  if (len1 >= len2) {
    r = {p1a, p1b, p2a, p2b};
  } else {
    r = {p2a, p2b, p1a, p1b};
  }
  return r;
}

Point2 diameter_center(const RecistAnnotation& r) {
  // Solve long_p1 + t*dl = short_p1 + s*ds for t.
  const Vec2 dl = r.long_p2 - r.long_p1;
  const Vec2 ds = r.short_p2 - r.short_p1;
  const Vec2 rhs = r.short_p1 - r.long_p1;
  const double det = cross(dl, ds);
  const double t = cross(rhs, ds) / det;
  return r.long_p1 + Vec2{t * dl.x, t * dl.y};
}

bool center_within_segments(const RecistAnnotation& r) {
  const Point2 c = diameter_center(r);
  const auto within = [&](Point2 a, Point2 b) {
    const Vec2 d = b - a;
    const double len2 = d.x * d.x + d.y * d.y;
    const Vec2 v = c - a;
    const double t = (v.x * d.x + v.y * d.y) / len2;
    return t >= -kGeomTol && t <= 1.0 + kGeomTol;
  };
  return within(r.long_p1, r.long_p2) && within(r.short_p1, r.short_p2);
}

bool QuarterRegion::contains(Point2 p) const {
  const Vec2 d = p - center;
  const double det = cross(arm_a, arm_b);
  const double u = (d.x * arm_b.y - d.y * arm_b.x) / det;
  const double v = (arm_a.x * d.y - arm_a.y * d.x) / det;
  return u >= 0.0 && v >= 0.0 && u * u + v * v <= 1.0;
}

void QuarterRegion::bounds(double& x_lo, double& y_lo, double& x_hi, double& y_hi) const {
  // Per axis the arc c + a*cos(t) + b*sin(t), t in [0, pi/2], attains its
  // extreme either at an endpoint or where tan(t) = b_axis / a_axis; the
  // region is the convex hull of the arc and the center.
  const auto axis_extremes = [](double c, double a, double b, double& lo, double& hi) {
    lo = std::min({c, c + a, c + b});
    hi = std::max({c, c + a, c + b});
    if (a * b > 0.0) {
      const double ext = c + (a > 0.0 ? 1.0 : -1.0) * std::hypot(a, b);
      lo = std::min(lo, ext);
      hi = std::max(hi, ext);
    }
  };
  axis_extremes(center.x, arm_a.x, arm_b.x, x_lo, x_hi);
  axis_extremes(center.y, arm_a.y, arm_b.y, y_lo, y_hi);
}

std::array<QuarterRegion, 4> quarter_regions(const RecistAnnotation& r) {
  const Point2 c = diameter_center(r);
  const std::array<Point2, 2> longs{r.long_p1, r.long_p2};
  const std::array<Point2, 2> shorts{r.short_p1, r.short_p2};
  for (Point2 p : longs)
    if (length(p - c) < kGeomTol) throw DegenerateArm("long-diameter endpoint coincides with center");
  for (Point2 p : shorts)
    if (length(p - c) < kGeomTol) throw DegenerateArm("short-diameter endpoint coincides with center");

  std::array<QuarterRegion, 4> out;
  std::size_t k = 0;
  for (Point2 lp : longs)
    for (Point2 sp : shorts) out[k++] = QuarterRegion{c, lp - c, sp - c};
  return out;
}

std::size_t mask_area(const BinaryMask& m) {
  std::size_t n = 0;
  for (std::uint8_t b : m.bits) n += b != 0;
  return n;
}

bool masks_bit_identical(const BinaryMask& a, const BinaryMask& b) {
  return a.origin_x == b.origin_x && a.origin_y == b.origin_y && a.width == b.width &&
         a.height == b.height && a.bits == b.bits;
}

namespace {

BinaryMask rasterize_regions(const QuarterRegion* regions, std::size_t n) {
  double x_lo = 0, y_lo = 0, x_hi = 0, y_hi = 0;
  regions[0].bounds(x_lo, y_lo, x_hi, y_hi);
  for (std::size_t i = 1; i < n; ++i) {
    double a, b, c, d;
    regions[i].bounds(a, b, c, d);
    x_lo = std::min(x_lo, a);
    y_lo = std::min(y_lo, b);
    x_hi = std::max(x_hi, c);
    y_hi = std::max(y_hi, d);
  }

  BinaryMask m;
  m.origin_x = static_cast<std::int64_t>(std::floor(x_lo)) - 1;
  m.origin_y = static_cast<std::int64_t>(std::floor(y_lo)) - 1;
  m.width = static_cast<std::int64_t>(std::ceil(x_hi)) + 1 - m.origin_x;
  m.height = static_cast<std::int64_t>(std::ceil(y_hi)) + 1 - m.origin_y;
  m.bits.assign(static_cast<std::size_t>(m.width * m.height), 0);

  for (std::int64_t ly = 0; ly < m.height; ++ly) {
    for (std::int64_t lx = 0; lx < m.width; ++lx) {
      const Point2 pc{static_cast<double>(m.origin_x + lx) + 0.5,
                      static_cast<double>(m.origin_y + ly) + 0.5};
      for (std::size_t i = 0; i < n; ++i) {
        if (regions[i].contains(pc)) {
          m.set(lx, ly, true);
          break;
        }
      }
    }
  }
  return m;
}

}  // namespace

BinaryMask rasterize_quarter(const QuarterRegion& q) { return rasterize_regions(&q, 1); }

BinaryMask rasterize_pseudo_mask(const RecistAnnotation& r) {
  const auto regions = quarter_regions(r);
  return rasterize_regions(regions.data(), regions.size());
}

}  // namespace recist_kit
