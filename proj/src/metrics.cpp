#include "recist_kit/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace recist_kit {

double box_iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  const std::size_t area_a = mask_area(a);
  const std::size_t area_b = mask_area(b);
  if (area_a == 0 && area_b == 0)
    throw BothEmptyMasks("mask IoU undefined for two empty masks");
  if (area_a == 0 || area_b == 0) return 0.0;

  const std::int64_t x0 = std::max(a.origin_x, b.origin_x);
  const std::int64_t y0 = std::max(a.origin_y, b.origin_y);
  const std::int64_t x1 = std::min(a.origin_x + a.width, b.origin_x + b.width);
  const std::int64_t y1 = std::min(a.origin_y + a.height, b.origin_y + b.height);

  std::size_t inter = 0;
  for (std::int64_t gy = y0; gy < y1; ++gy)
    for (std::int64_t gx = x0; gx < x1; ++gx)
      inter += a.at(gx - a.origin_x, gy - a.origin_y) && b.at(gx - b.origin_x, gy - b.origin_y);

  return static_cast<double>(inter) / static_cast<double>(area_a + area_b - inter);
}

MatchResult match_detections(std::span<const Detection> dets,
                             std::span<const GroundTruth> gts,
                             double iou_threshold) {
  MatchResult res;
  res.det_is_tp.assign(dets.size(), false);
  res.gt_matched.assign(gts.size(), false);
  res.det_matched_gt.assign(dets.size(), -1);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return dets[i].score_s1 > dets[j].score_s1;
  });

  for (std::size_t d : order) {
    int best_gt = -1;
    double best_iou = iou_threshold;  // strict: must exceed the threshold
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (res.gt_matched[g]) continue;
      const double iou = box_iou(dets[d].box, gts[g].box);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      res.det_is_tp[d] = true;
      res.det_matched_gt[d] = best_gt;
      res.gt_matched[static_cast<std::size_t>(best_gt)] = true;
    }
  }
  return res;
}

}  // namespace recist_kit
