#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "recist_kit/io.hpp"
#include "recist_kit/rng.hpp"

using namespace recist_kit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "recist_kit_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

BinaryMask random_mask(rng::Engine& eng) {
  BinaryMask m;
  m.origin_x = static_cast<std::int64_t>(rng::next_below(eng, 100)) - 50;
  m.origin_y = static_cast<std::int64_t>(rng::next_below(eng, 100)) - 50;
  m.width = 1 + static_cast<std::int64_t>(rng::next_below(eng, 30));
  m.height = 1 + static_cast<std::int64_t>(rng::next_below(eng, 30));
  m.bits.resize(static_cast<std::size_t>(m.width * m.height));
  for (auto& b : m.bits) b = rng::next_below(eng, 2) ? 1 : 0;
  return m;
}

const char* kAnnotationsCsv =
    "image_id,measurement_coordinates,bounding_box,split\n"
    "scan_a,\"10, 20, 40, 20, 25, 8, 25, 30\",\"8, 6, 42, 32\",train\n"
    "scan_a,\"60, 60, 90, 70, 78, 50, 72, 80\",\"58, 48, 92, 82\",train\n"
    "scan_b,\"110, 20, 140, 20, 125, 8, 125, 30\",\"108, 6, 142, 32\",test\n";

}  // namespace

TEST_CASE("load_annotations groups rows by image id") {
  const auto path = temp_file("annotations.csv");
  write_text(path, kAnnotationsCsv);

  io::LoadReport report;
  const auto records = io::load_annotations(path.string(), std::nullopt, report);
  REQUIRE(records.size() == 2);
  CHECK(records[0].image_id == "scan_a");
  CHECK(records[0].gts.size() == 2);
  CHECK(records[1].image_id == "scan_b");
  CHECK(records[1].gts.size() == 1);
  CHECK(report.rows_total == 3);
  CHECK(report.rows_loaded == 3);
  CHECK(report.rows_skipped == 0);
  CHECK(report.rows_loaded + report.rows_skipped == report.rows_total);
  REQUIRE(records[0].gts[0].recist.has_value());
  CHECK(records[0].gts[0].recist->long_p1.x == 10);
}

TEST_CASE("split filter keeps only matching rows") {
  const auto path = temp_file("annotations.csv");
  write_text(path, kAnnotationsCsv);
  io::LoadReport report;
  const auto records = io::load_annotations(path.string(), io::Split::Test, report);
  REQUIRE(records.size() == 1);
  CHECK(records[0].image_id == "scan_b");
}

TEST_CASE("invalid RECIST rows are skipped with a warning") {
  const auto path = temp_file("bad_recist.csv");
  write_text(path,
             "image_id,measurement_coordinates,bounding_box,split\n"
             "scan_a,\"0, 0, 10, 0, 0, 1, 10, 1\",\"0, 0, 10, 2\",train\n"  // parallel
             "scan_a,\"10, 20, 40, 20, 25, 8, 25, 30\",\"8, 6, 42, 32\",train\n");
  io::LoadReport report;
  const auto records = io::load_annotations(path.string(), std::nullopt, report);
  REQUIRE(records.size() == 1);
  CHECK(records[0].gts.size() == 1);
  CHECK(report.rows_skipped == 1);
  CHECK(report.rows_loaded + report.rows_skipped == report.rows_total);
}

TEST_CASE("malformed rows raise ParseError with the line number") {
  const auto path = temp_file("malformed.csv");
  write_text(path,
             "image_id,measurement_coordinates,bounding_box,split\n"
             "scan_a,\"10, 20, 40\",\"8, 6, 42, 32\",train\n");
  io::LoadReport report;
  CHECK_THROWS_AS(io::load_annotations(path.string(), std::nullopt, report), ParseError);
}

TEST_CASE("load_detections attaches by image id and reports orphans") {
  const auto ann_path = temp_file("annotations.csv");
  write_text(ann_path, kAnnotationsCsv);
  io::LoadReport report;
  auto records = io::load_annotations(ann_path.string(), std::nullopt, report);

  const auto det_path = temp_file("detections.jsonl");
  write_text(det_path,
             "{\"image_id\": \"scan_a\", \"box\": [8, 6, 42, 32], \"score\": 0.9}\n"
             "{\"image_id\": \"scan_x\", \"box\": [0, 0, 5, 5], \"score\": 0.5}\n");
  const auto det_report = io::load_detections(det_path.string(), records);
  CHECK(det_report.entries_loaded == 1);
  REQUIRE(det_report.orphan_image_ids.size() == 1);
  CHECK(det_report.orphan_image_ids[0] == "scan_x");
  CHECK(records[0].dets.size() == 1);
  CHECK(records[0].dets[0].score_s1 == doctest::Approx(0.9));
}

TEST_CASE("empty detections file loads cleanly") {
  const auto det_path = temp_file("empty.jsonl");
  write_text(det_path, "");
  std::vector<ImageRecord> records{{"scan_a", {}, {}}};
  const auto report = io::load_detections(det_path.string(), records);
  CHECK(report.entries_loaded == 0);
  CHECK(report.orphan_image_ids.empty());
}

TEST_CASE("RLE with the wrong bit count names the line") {
  const auto det_path = temp_file("bad_rle.jsonl");
  write_text(det_path,
             "{\"image_id\": \"scan_a\", \"box\": [0, 0, 5, 5], \"score\": 0.5, "
             "\"mask_rle\": \"0 0 4 4 3 2\"}\n");
  std::vector<ImageRecord> records{{"scan_a", {}, {}}};
  try {
    io::load_detections(det_path.string(), records);
    FAIL("expected RleLengthMismatch");
  } catch (const RleLengthMismatch& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("RLE round-trip is bit-identical") {
  rng::Engine eng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mask = random_mask(eng);
    const auto decoded = io::decode_rle(io::encode_rle(mask));
    CHECK(masks_bit_identical(mask, decoded));
  }
  // Known string form.
  BinaryMask m{2, 3, 2, 2, {0, 1, 1, 0}};
  CHECK(io::encode_rle(m) == "2 3 2 2 1 2 1");
}

TEST_CASE("PNG plus sidecar round-trip preserves bits and origin") {
  rng::Engine eng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mask = random_mask(eng);
    const auto png = temp_file("mask.png").string();
    const auto sidecar = temp_file("mask.json").string();
    io::write_mask_png(mask, png, sidecar);
    const auto back = io::read_mask_png(png, sidecar);
    CHECK(masks_bit_identical(mask, back));
  }
}

TEST_CASE("ensure_pseudo_masks builds masks from RECIST") {
  const auto path = temp_file("annotations.csv");
  write_text(path, kAnnotationsCsv);
  io::LoadReport report;
  auto records = io::load_annotations(path.string(), std::nullopt, report);
  io::ensure_pseudo_masks(records);
  for (const auto& img : records)
    for (const auto& gt : img.gts) {
      REQUIRE(gt.pseudo_mask.has_value());
      CHECK(mask_area(*gt.pseudo_mask) > 0);
    }

  // Serial path produces the same masks.
  auto serial = io::load_annotations(path.string(), std::nullopt, report);
  io::ensure_pseudo_masks(serial, parallel::Exec::Serial);
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t g = 0; g < records[i].gts.size(); ++g)
      CHECK(masks_bit_identical(*records[i].gts[g].pseudo_mask,
                                *serial[i].gts[g].pseudo_mask));
}
