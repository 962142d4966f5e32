#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "recist_kit/errors.hpp"

namespace recist_kit {

// Continuous image coordinates: x rightward, y downward. Integer pixel (i, j)
// has its center at (i + 0.5, j + 0.5).
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(Point2 p, Vec2 v) { return {p.x + v.x, p.y + v.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 v) { return std::hypot(v.x, v.y); }

// One RECIST measurement: the long and short diameter segments, each given by
// its two endpoints. Construct via normalize_recist so the length ordering and
// non-parallelism invariants hold.
struct RecistAnnotation {
  Point2 long_p1, long_p2;
  Point2 short_p1, short_p2;
};

// Orders the two segments so the longer one becomes the long diameter.
// Throws ZeroLengthDiameter if either segment is shorter than 1e-6 px and
// ParallelDiameters if the segment directions are parallel within 1e-6.
RecistAnnotation normalize_recist(Point2 p1a, Point2 p1b, Point2 p2a, Point2 p2b);

// Intersection of the infinite lines through the two diameters.
Point2 diameter_center(const RecistAnnotation& r);

// True when the center lies within both diameters' segment extents. Noisy
// annotations can place the crossing outside a segment; callers may warn.
bool center_within_segments(const RecistAnnotation& r);

// Affine quarter-ellipse {center + u*arm_a + v*arm_b : u, v >= 0, u^2+v^2 <= 1}.
// A true quarter-ellipse when the arms are perpendicular.
struct QuarterRegion {
  Point2 center;
  Vec2 arm_a;
  Vec2 arm_b;

  bool contains(Point2 p) const;
  // Tight axis-aligned bounds of the region.
  void bounds(double& x_lo, double& y_lo, double& x_hi, double& y_hi) const;
};

// The four quarters spanned by pairing each long-diameter endpoint with each
// short-diameter endpoint, all centered at diameter_center(r).
// Throws DegenerateArm if an endpoint coincides with the center.
std::array<QuarterRegion, 4> quarter_regions(const RecistAnnotation& r);

// Rasterized foreground region. origin_* give the image coordinates of the
// mask window's top-left pixel; bits are row-major, one byte per pixel.
struct BinaryMask {
  std::int64_t origin_x = 0;
  std::int64_t origin_y = 0;
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<std::uint8_t> bits;

  bool at(std::int64_t local_x, std::int64_t local_y) const {
    return bits[static_cast<std::size_t>(local_y * width + local_x)] != 0;
  }
  void set(std::int64_t local_x, std::int64_t local_y, bool v) {
    bits[static_cast<std::size_t>(local_y * width + local_x)] = v ? 1 : 0;
  }
  // Test in image coordinates; false outside the window.
  bool at_global(std::int64_t gx, std::int64_t gy) const {
    const std::int64_t lx = gx - origin_x;
    const std::int64_t ly = gy - origin_y;
    if (lx < 0 || ly < 0 || lx >= width || ly >= height) return false;
    return at(lx, ly);
  }
};

std::size_t mask_area(const BinaryMask& m);

bool masks_bit_identical(const BinaryMask& a, const BinaryMask& b);

// Rasterizes one quarter region alone (same rule and window convention).
BinaryMask rasterize_quarter(const QuarterRegion& q);

// Union of the four quarter regions on the pixel grid: the window is the
// tight bounding box of all four regions expanded by 1 px, and a pixel is set
// iff its center lies in at least one quarter. No anti-aliasing.
BinaryMask rasterize_pseudo_mask(const RecistAnnotation& r);

}  // namespace recist_kit
