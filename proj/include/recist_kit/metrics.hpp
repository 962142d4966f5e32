#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recist_kit/geometry.hpp"

namespace recist_kit {

struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double area() const { return (x_max - x_min) * (y_max - y_min); }
  bool valid() const { return x_max > x_min && y_max > y_min; }
};

struct Detection {
  BBox box;
  double score_s1 = 0.0;                 // classification score, in [0, 1]
  std::optional<BinaryMask> mask;        // predicted mask, when available
  std::optional<double> score_s2;        // mask overlap against ground truth
};

struct GroundTruth {
  BBox box;
  std::optional<BinaryMask> pseudo_mask;
  std::optional<RecistAnnotation> recist;
};

double box_iou(const BBox& a, const BBox& b);

// IoU of set bits compared in global image coordinates (origins respected).
// Throws BothEmptyMasks when neither mask has a set bit.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

struct MatchResult {
  std::vector<bool> det_is_tp;           // per detection, input order
  std::vector<bool> gt_matched;          // per ground truth
  std::vector<int> det_matched_gt;       // GT index per detection, -1 if FP
};

// Greedy matching: detections in descending score_s1 (ties by input index);
// a detection is TP iff some unmatched GT has IoU strictly above
// iou_threshold, taking the highest-IoU such GT. Each GT matches once.
MatchResult match_detections(std::span<const Detection> dets,
                             std::span<const GroundTruth> gts,
                             double iou_threshold);

}  // namespace recist_kit
