#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recist_kit/io.hpp"

namespace recist_kit::synth {

// Controls for the synthetic dataset generator. Lesions are perpendicular
// RECIST crosses with random arm lengths; each lesion gets one TP detection
// and each image a Poisson number of FP detections disjoint from every GT.
struct SynthConfig {
  std::uint64_t n_images = 10;
  int lesions_min = 1;
  int lesions_max = 3;
  int image_size = 512;
  double arm_min = 8.0;
  double arm_max = 32.0;
  double tp_score_mean = 0.9;
  double tp_score_std = 0.05;
  double fp_per_image_rate = 1.0;
  double fp_score_mean = 0.5;
  double fp_score_std = 0.1;
  double jitter_px = 0.0;   // TP box localization noise
  double mask_noise = 0.0;  // fraction of TP mask window bits flipped

  void validate() const;  // throws std::invalid_argument
};

// Flat `key = value` TOML (comments and table headers tolerated; unknown
// keys rejected). Keys match the SynthConfig field names.
SynthConfig load_synth_config(const std::string& path);

struct SynthOutput {
  std::vector<io::AnnotationRow> annotations;
  std::vector<io::DetectionFileEntry> detections;
  std::uint64_t generated_fp_count = 0;
};

// Fully determined by (config, seed): one sequential RNG stream.
// Throws PlacementFailure when disjoint placement keeps failing (too dense).
SynthOutput generate(const SynthConfig& config, std::uint64_t seed);

// In-memory view of the generated files, for tests and benchmarks.
std::vector<ImageRecord> build_records(const SynthOutput& out);

}  // namespace recist_kit::synth
