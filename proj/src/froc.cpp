#include "recist_kit/froc.hpp"

#include <algorithm>

namespace recist_kit {

FrocCurve compute_froc(std::span<const ImageRecord> dataset, double iou_threshold,
                       parallel::Exec exec) {
  std::size_t total_gts = 0;
  for (const auto& img : dataset) total_gts += img.gts.size();
  if (total_gts == 0) throw NoGroundTruth("dataset contains no ground-truth lesions");

  // Greedy matching processes detections in descending score, so the labels
  // assigned on the full list coincide with matching any score-prefix of it.
  // One match per image is enough; the sweep is then a cumulative count.
  std::vector<MatchResult> matches(dataset.size());
  parallel::for_each_index(dataset.size(), exec, [&](std::size_t i) {
    matches[i] = match_detections(dataset[i].dets, dataset[i].gts, iou_threshold);
  });

  std::vector<std::pair<double, bool>> labeled;  // (score, is_tp)
  for (std::size_t i = 0; i < dataset.size(); ++i)
    for (std::size_t d = 0; d < dataset[i].dets.size(); ++d)
      labeled.emplace_back(dataset[i].dets[d].score_s1, matches[i].det_is_tp[d]);

  std::sort(labeled.begin(), labeled.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  FrocCurve curve;
  const double n_images = static_cast<double>(dataset.size());
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < labeled.size(); ++k) {
    if (labeled[k].second)
      ++tp;
    else
      ++fp;
    const bool last_at_this_score = k + 1 == labeled.size() ||
                                    labeled[k + 1].first != labeled[k].first;
    if (last_at_this_score) {
      curve.points.push_back({labeled[k].first, static_cast<double>(fp) / n_images,
                              static_cast<double>(tp) / static_cast<double>(total_gts)});
    }
  }
  return curve;
}

OperatingPoint sensitivity_at(const FrocCurve& curve, double target_afp) {
  OperatingPoint op;
  bool any_at_or_below = false;
  double max_afp = 0.0;
  for (const auto& p : curve.points) {
    max_afp = std::max(max_afp, p.avg_fp_per_image);
    if (p.avg_fp_per_image <= target_afp) {
      any_at_or_below = true;
      op.sensitivity = p.sensitivity;  // sweep order: keeps the last such point
    }
  }
  if (!curve.points.empty() && max_afp < target_afp) {
    op.saturated = true;
    op.sensitivity = curve.points.back().sensitivity;
  } else if (!any_at_or_below) {
    op.sensitivity = 0.0;
  }
  return op;
}

}  // namespace recist_kit
