// Command-line front end: pseudomask / eval / mine / synth subcommands over
// the annotation CSV and detections JSONL formats (see docs/FORMATS.md).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "recist_kit/io.hpp"
#include "recist_kit/synth.hpp"

namespace fs = std::filesystem;
using namespace recist_kit;

namespace {

std::string sanitize_id(const std::string& id) {
  std::string out = id;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
      c = '_';
  return out;
}

void print_load_summary(const io::LoadReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "annotations: " << report.rows_loaded << " loaded + " << report.rows_skipped
            << " skipped = " << report.rows_total << " rows\n";
}

std::vector<ImageRecord> load_dataset(const std::string& annotations_path,
                                      const std::string& detections_path,
                                      const std::optional<io::Split>& split_filter) {
  io::LoadReport report;
  auto records = io::load_annotations(annotations_path, split_filter, report);
  print_load_summary(report);
  const auto det_report = io::load_detections(detections_path, records);
  if (!det_report.orphan_image_ids.empty()) {
    std::cerr << "warning: " << det_report.orphan_image_ids.size()
              << " detection entries reference unknown image ids:";
    for (const auto& id : det_report.orphan_image_ids) std::cerr << " " << id;
    std::cerr << "\n";
  }
  return records;
}

int run_pseudomask(const std::string& annotations, const std::string& image_id,
                   const std::string& out_dir, const std::string& format) {
  io::LoadReport report;
  auto records = io::load_annotations(annotations, std::nullopt, report);
  print_load_summary(report);

  if (!image_id.empty()) {
    std::erase_if(records, [&](const ImageRecord& r) { return r.image_id != image_id; });
    if (records.empty()) {
      std::cerr << "error: image id '" << image_id << "' not found\n";
      return 1;
    }
  }

  io::ensure_pseudo_masks(records);
  fs::create_directories(out_dir);

  for (const auto& img : records) {
    for (std::size_t g = 0; g < img.gts.size(); ++g) {
      const auto& mask = *img.gts[g].pseudo_mask;
      const std::string stem =
          (fs::path(out_dir) / (sanitize_id(img.image_id) + "_" + std::to_string(g))).string();
      if (format == "png") {
        io::write_mask_png(mask, stem + ".png", stem + ".json");
      } else {
        std::ofstream f(stem + ".rle", std::ios::binary);
        f << io::encode_rle(mask) << "\n";
      }
    }
  }
  return 0;
}

int run_eval(const std::string& annotations, const std::string& detections, double iou,
             const std::string& froc_out, const std::string& ops_out,
             const std::optional<io::Split>& split_filter) {
  auto records = load_dataset(annotations, detections, split_filter);
  const auto curve = compute_froc(records, iou);
  io::write_froc_csv(froc_out, curve);

  const std::vector<double> targets{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<OperatingPoint> points;
  for (double t : targets) points.push_back(sensitivity_at(curve, t));
  io::write_operating_points_csv(ops_out, targets, points);
  return 0;
}

int run_mine(const std::string& annotations, const std::string& detections, std::uint64_t seed,
             const std::string& out_path) {
  auto records = load_dataset(annotations, detections, std::nullopt);
  io::ensure_pseudo_masks(records);
  const auto outcomes = mine_dataset(records, seed);
  io::write_mining_jsonl(out_path, outcomes);
  return 0;
}

int run_synth(const std::string& config_path, std::uint64_t seed,
              const std::string& out_annotations, const std::string& out_detections) {
  const auto config = synth::load_synth_config(config_path);
  const auto out = synth::generate(config, seed);
  io::write_annotations_csv(out_annotations, out.annotations);
  io::write_detections_jsonl(out_detections, out.detections);
  std::cerr << "synth: " << out.annotations.size() << " lesions, " << out.detections.size()
            << " detections (" << out.generated_fp_count << " FPs)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RECIST pseudo-mask, FROC evaluation and hard negative mining toolkit"};
  app.require_subcommand(1);

  std::string annotations, detections, image_id, out_dir, format = "png";
  std::string froc_out, ops_out, out_path, config_path, out_annotations, out_detections;
  std::string split_text;
  double iou = 0.5;
  std::uint64_t seed = 0;

  auto* pm = app.add_subcommand("pseudomask", "Rasterize pseudo masks from RECIST annotations");
  pm->add_option("--annotations", annotations)->required();
  pm->add_option("--image-id", image_id);
  pm->add_option("--out-dir", out_dir)->required();
  pm->add_option("--format", format)->check(CLI::IsMember({"png", "rle"}));

  auto* ev = app.add_subcommand("eval", "FROC evaluation of detections against annotations");
  ev->add_option("--annotations", annotations)->required();
  ev->add_option("--detections", detections)->required();
  ev->add_option("--iou", iou);
  ev->add_option("--froc-out", froc_out)->required();
  ev->add_option("--ops-out", ops_out)->required();
  ev->add_option("--split", split_text)->check(CLI::IsMember({"train", "val", "test"}));

  auto* mn = app.add_subcommand("mine", "Hard negative example mining over a detection set");
  mn->add_option("--annotations", annotations)->required();
  mn->add_option("--detections", detections)->required();
  mn->add_option("--seed", seed)->required();
  mn->add_option("--out", out_path)->required();

  auto* sy = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  sy->add_option("--config", config_path)->required();
  sy->add_option("--seed", seed)->required();
  sy->add_option("--out-annotations", out_annotations)->required();
  sy->add_option("--out-detections", out_detections)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pm->parsed()) return run_pseudomask(annotations, image_id, out_dir, format);
    if (ev->parsed()) {
      std::optional<io::Split> filter;
      if (!split_text.empty()) filter = io::parse_split(split_text);
      return run_eval(annotations, detections, iou, froc_out, ops_out, filter);
    }
    if (mn->parsed()) return run_mine(annotations, detections, seed, out_path);
    if (sy->parsed()) return run_synth(config_path, seed, out_annotations, out_detections);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
