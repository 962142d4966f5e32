#pragma once

#include <cstdint>
#include <optional>

#include "recist_kit/froc.hpp"

namespace recist_kit {

enum class MiningBranch {
  GoodDetection,  // some detection overlaps a pseudo mask well (s2 > 0.3)
  PoorDetection,  // no detection does; mine from high-score detections
  Empty,          // no detections at all
};

const char* to_string(MiningBranch b);

struct MiningOutcome {
  std::optional<std::size_t> anchor;  // the well-overlapping detection, if any
  std::vector<std::size_t> mined;     // chosen hard negatives, at most 3
  MiningBranch branch = MiningBranch::Empty;
};

// Maximum mask IoU between the detection's mask and any GT pseudo mask.
// Throws MissingMask when the detection has no mask or no GT has one.
double compute_s2(const Detection& det, std::span<const GroundTruth> gts);

// The mining rule over one image's detections (score_s1 and score_s2 must be
// populated). When some detection has s2 > 0.3, the anchor is the one with
// maximum s2 (ties to the lowest index) and candidates are detections with a
// strictly higher s1. Otherwise candidates are detections with s1 > 0.7.
// min(3, #candidates) are drawn uniformly without replacement from the
// candidate set, seeded by rng_seed.
MiningOutcome mine_hard_negatives(std::span<const Detection> dets, std::uint64_t rng_seed);

// Mines every image independently. Detections without masks (or images whose
// GTs carry no pseudo mask) get s2 = 0. The per-image seed is derived from
// (rng_seed, image_id), so outcomes do not depend on image order or threads.
std::vector<std::pair<std::string, MiningOutcome>> mine_dataset(
    std::span<const ImageRecord> dataset, std::uint64_t rng_seed,
    parallel::Exec exec = parallel::Exec::Parallel);

}  // namespace recist_kit
