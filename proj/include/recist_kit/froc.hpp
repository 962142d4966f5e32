#pragma once

#include <string>
#include <vector>

#include "recist_kit/metrics.hpp"
#include "recist_kit/parallel.hpp"

namespace recist_kit {

// One CT slice: its ground-truth lesions and the detections produced on it.
struct ImageRecord {
  std::string image_id;
  std::vector<GroundTruth> gts;
  std::vector<Detection> dets;
};

struct FrocPoint {
  double threshold = 0.0;
  double avg_fp_per_image = 0.0;
  double sensitivity = 0.0;
};

// Thresholds strictly decreasing; avg FP and sensitivity non-decreasing.
struct FrocCurve {
  std::vector<FrocPoint> points;
};

// Sweeps the sorted distinct detection scores (descending); at each threshold
// t keeps detections with score_s1 >= t, matches per image, and records
// sensitivity = matched GTs / total GTs and avg FP = FPs / #images.
// Throws NoGroundTruth when the dataset carries no GT at all.
FrocCurve compute_froc(std::span<const ImageRecord> dataset, double iou_threshold,
                       parallel::Exec exec = parallel::Exec::Parallel);

struct OperatingPoint {
  double sensitivity = 0.0;
  // Set when the curve terminates below target_afp; sensitivity is then the
  // curve's terminal value rather than a readout at the target.
  bool saturated = false;
};

// Step-function readout: the sensitivity of the last sweep point with
// avg_fp_per_image <= target_afp; 0 when every point exceeds the target.
OperatingPoint sensitivity_at(const FrocCurve& curve, double target_afp);

}  // namespace recist_kit
