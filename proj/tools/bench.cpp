// Compares the serial reference path against the OpenMP path for the
// per-image kernels: pseudo-mask rasterization, FROC matching, and mining.

#include <chrono>
#include <cstdio>
#include <functional>

#include "recist_kit/io.hpp"
#include "recist_kit/synth.hpp"

using namespace recist_kit;

namespace {

double time_s(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-24s serial %8.3fs   openmp %8.3fs   speedup %.2fx\n", name, serial_s,
              parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
  synth::SynthConfig cfg;
  cfg.n_images = 300;
  cfg.lesions_min = 1;
  cfg.lesions_max = 3;
  cfg.image_size = 512;
  cfg.arm_min = 16.0;
  cfg.arm_max = 48.0;
  cfg.fp_per_image_rate = 4.0;
  cfg.jitter_px = 2.0;
  cfg.mask_noise = 0.02;

  std::printf("generating %llu synthetic images...\n",
              static_cast<unsigned long long>(cfg.n_images));
  const auto output = synth::generate(cfg, 1);
  auto records = synth::build_records(output);
  std::printf("workers available: %d\n\n", parallel::max_workers());

  {
    auto serial_records = records;
    auto parallel_records = records;
    const double ts = time_s([&] {
      io::ensure_pseudo_masks(serial_records, parallel::Exec::Serial);
    });
    const double tp = time_s([&] {
      io::ensure_pseudo_masks(parallel_records, parallel::Exec::Parallel);
    });
    report("pseudo-mask build", ts, tp);
    records = std::move(parallel_records);
  }

  {
    FrocCurve serial_curve, parallel_curve;
    const double ts = time_s([&] {
      serial_curve = compute_froc(records, 0.5, parallel::Exec::Serial);
    });
    const double tp = time_s([&] {
      parallel_curve = compute_froc(records, 0.5, parallel::Exec::Parallel);
    });
    report("FROC matching", ts, tp);
    if (serial_curve.points.size() != parallel_curve.points.size()) {
      std::printf("ERROR: serial and parallel FROC disagree\n");
      return 1;
    }
  }

  {
    std::vector<std::pair<std::string, MiningOutcome>> serial_out, parallel_out;
    const double ts = time_s([&] { serial_out = mine_dataset(records, 7, parallel::Exec::Serial); });
    const double tp =
        time_s([&] { parallel_out = mine_dataset(records, 7, parallel::Exec::Parallel); });
    report("hard negative mining", ts, tp);
    for (std::size_t i = 0; i < serial_out.size(); ++i) {
      if (serial_out[i].second.mined != parallel_out[i].second.mined) {
        std::printf("ERROR: serial and parallel mining disagree\n");
        return 1;
      }
    }
  }
  return 0;
}
