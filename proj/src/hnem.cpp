#include "recist_kit/hnem.hpp"

#include <algorithm>

#include "recist_kit/rng.hpp"

namespace recist_kit {

namespace {
constexpr double kGoodOverlap = 0.3;   // strict: s2 > 0.3
constexpr double kHighScore = 0.7;     // strict: s1 > 0.7
constexpr std::size_t kMaxMined = 3;
}  // namespace

const char* to_string(MiningBranch b) {
  switch (b) {
    case MiningBranch::GoodDetection: return "GoodDetection";
    case MiningBranch::PoorDetection: return "PoorDetection";
    case MiningBranch::Empty: return "Empty";
  }
  return "Empty";
}

double compute_s2(const Detection& det, std::span<const GroundTruth> gts) {
  if (!det.mask) throw MissingMask("detection has no predicted mask");
  bool any_gt_mask = false;
  double best = 0.0;
  for (const auto& gt : gts) {
    if (!gt.pseudo_mask) continue;
    any_gt_mask = true;
    best = std::max(best, mask_iou(*det.mask, *gt.pseudo_mask));
  }
  if (!any_gt_mask) throw MissingMask("no ground truth carries a pseudo mask");
  return best;
}

MiningOutcome mine_hard_negatives(std::span<const Detection> dets, std::uint64_t rng_seed) {
  MiningOutcome out;
  if (dets.empty()) {
    out.branch = MiningBranch::Empty;
    return out;
  }

  std::size_t best_idx = 0;
  double best_s2 = -1.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const double s2 = dets[i].score_s2.value_or(0.0);
    if (s2 > best_s2) {  // strict: ties keep the lowest index
      best_s2 = s2;
      best_idx = i;
    }
  }

  std::vector<std::size_t> candidates;
  if (best_s2 > kGoodOverlap) {
    out.branch = MiningBranch::GoodDetection;
    out.anchor = best_idx;
    const double anchor_s1 = dets[best_idx].score_s1;
    for (std::size_t j = 0; j < dets.size(); ++j)
      if (j != best_idx && dets[j].score_s1 > anchor_s1) candidates.push_back(j);
  } else {
    out.branch = MiningBranch::PoorDetection;
    for (std::size_t j = 0; j < dets.size(); ++j)
      if (dets[j].score_s1 > kHighScore) candidates.push_back(j);
  }

  const std::size_t m = std::min(kMaxMined, candidates.size());
  if (m > 0) {
    rng::Engine eng(rng_seed);
    out.mined = rng::sample_without_replacement(eng, candidates, m);
  }
  return out;
}

std::vector<std::pair<std::string, MiningOutcome>> mine_dataset(
    std::span<const ImageRecord> dataset, std::uint64_t rng_seed, parallel::Exec exec) {
  std::vector<std::pair<std::string, MiningOutcome>> out(dataset.size());
  parallel::for_each_index(dataset.size(), exec, [&](std::size_t i) {
    const auto& img = dataset[i];
    bool any_gt_mask = false;
    for (const auto& gt : img.gts) any_gt_mask |= gt.pseudo_mask.has_value();

    std::vector<Detection> dets(img.dets.begin(), img.dets.end());
    for (auto& det : dets) {
      if (det.score_s2) continue;
      det.score_s2 = (det.mask && any_gt_mask) ? compute_s2(det, img.gts) : 0.0;
    }

    const std::uint64_t seed = rng::derive_image_seed(rng_seed, img.image_id);
    out[i] = {img.image_id, mine_hard_negatives(dets, seed)};
  });
  return out;
}

}  // namespace recist_kit
