#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "recist_kit/froc.hpp"
#include "recist_kit/hnem.hpp"

namespace recist_kit::io {

enum class Split { Train, Val, Test };

const char* to_string(Split s);
std::optional<Split> parse_split(const std::string& text);

// One annotation CSV row. Columns are documented in docs/FORMATS.md:
//   image_id,measurement_coordinates,bounding_box,split
// with the coordinate fields quoted comma-separated float lists (long
// diameter endpoints first, then short), mirroring the DeepLesion layout.
struct AnnotationRow {
  std::string image_id;
  std::array<double, 8> recist_coords{};  // x1,y1,x2,y2 long; x3,y3,x4,y4 short
  std::array<double, 4> gt_box{};         // x_min,y_min,x_max,y_max
  Split split = Split::Train;
};

// One detections JSONL line:
//   {"image_id": ..., "box": [x_min,y_min,x_max,y_max], "score": ...,
//    "mask_rle": "..."}   (mask_rle optional)
struct DetectionFileEntry {
  std::string image_id;
  std::array<double, 4> box{};
  double score = 0.0;
  std::optional<std::string> mask_rle;
};

struct LoadReport {
  std::size_t rows_total = 0;
  std::size_t rows_loaded = 0;
  std::size_t rows_skipped = 0;            // invalid RECIST, counted and warned
  std::size_t box_slack_warnings = 0;      // endpoint outside gt_box by > 2 px
  std::size_t center_outside_warnings = 0; // diameter crossing outside a segment
  std::vector<std::string> warnings;
};

// Groups rows by image_id (records ordered by first appearance). Rows whose
// RECIST fails validation are skipped and counted. Pseudo masks are not
// built here; see ensure_pseudo_masks. Throws ParseError on malformed input.
std::vector<ImageRecord> load_annotations(const std::string& path,
                                          std::optional<Split> split_filter,
                                          LoadReport& report);

struct DetectionLoadReport {
  std::size_t entries_loaded = 0;
  std::vector<std::string> orphan_image_ids;  // ids absent from the annotations
};

// Attaches detections to matching records by image_id. Throws ParseError or
// RleLengthMismatch (both carrying the line number).
DetectionLoadReport load_detections(const std::string& path,
                                    std::vector<ImageRecord>& records);

// Builds the pseudo mask of every GT that has a RECIST but no mask yet.
void ensure_pseudo_masks(std::vector<ImageRecord>& records,
                         parallel::Exec exec = parallel::Exec::Parallel);

// RLE text form: "origin_x origin_y width height" then alternating run
// lengths over the row-major bits, starting with the background run.
std::string encode_rle(const BinaryMask& mask);
BinaryMask decode_rle(const std::string& text);  // throws RleLengthMismatch

// PNG form: 8-bit grayscale, 0 background / 255 foreground, window-sized,
// plus a sidecar JSON with the window origin.
void write_mask_png(const BinaryMask& mask, const std::string& png_path,
                    const std::string& sidecar_path);
BinaryMask read_mask_png(const std::string& png_path, const std::string& sidecar_path);

void write_annotations_csv(const std::string& path, const std::vector<AnnotationRow>& rows);
void write_detections_jsonl(const std::string& path,
                            const std::vector<DetectionFileEntry>& entries);

void write_froc_csv(const std::string& path, const FrocCurve& curve);
void write_operating_points_csv(const std::string& path,
                                const std::vector<double>& afp_targets,
                                const std::vector<OperatingPoint>& points);
void write_mining_jsonl(const std::string& path,
                        const std::vector<std::pair<std::string, MiningOutcome>>& outcomes);

}  // namespace recist_kit::io
