#include "recist_kit/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace recist_kit::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(line_no, "unterminated quoted field");
  fields.push_back(cur);
  return fields;
}

std::vector<double> parse_float_list(const std::string& field, std::size_t line_no) {
  std::vector<double> vals;
  std::istringstream ss(field);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos != tok.size()) throw std::invalid_argument(tok);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad float '" + tok + "'");
    }
  }
  return vals;
}

std::string format_float_list(const double* vals, std::size_t n) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g", vals[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(const std::string& text) {
  if (text == "train") return Split::Train;
  if (text == "val") return Split::Val;
  if (text == "test") return Split::Test;
  return std::nullopt;
}

std::vector<ImageRecord> load_annotations(const std::string& path,
                                          std::optional<Split> split_filter,
                                          LoadReport& report) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open annotations file: " + path);

  std::string line;
  if (!std::getline(f, line)) throw ParseError(1, "missing header");

  std::vector<ImageRecord> records;
  std::unordered_map<std::string, std::size_t> index_by_id;
  std::size_t line_no = 1;

  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    ++report.rows_total;

    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 columns");

    const std::string& image_id = fields[0];
    if (image_id.empty()) throw ParseError(line_no, "empty image_id");

    const auto coords = parse_float_list(fields[1], line_no);
    if (coords.size() != 8) throw ParseError(line_no, "expected 8 measurement coordinates");
    const auto box_vals = parse_float_list(fields[2], line_no);
    if (box_vals.size() != 4) throw ParseError(line_no, "expected 4 bounding-box values");
    const auto split = parse_split(fields[3]);
    if (!split) throw ParseError(line_no, "bad split value '" + fields[3] + "'");

    if (split_filter && *split != *split_filter) continue;

    GroundTruth gt;
    gt.box = BBox{box_vals[0], box_vals[1], box_vals[2], box_vals[3]};
    if (!gt.box.valid()) throw ParseError(line_no, "degenerate bounding box");

    try {
      gt.recist = normalize_recist({coords[0], coords[1]}, {coords[2], coords[3]},
                                   {coords[4], coords[5]}, {coords[6], coords[7]});
    } catch (const std::runtime_error& e) {
      ++report.rows_skipped;
      report.warnings.push_back("line " + std::to_string(line_no) +
                                ": invalid RECIST, row skipped (" + e.what() + ")");
      continue;
    }

    for (std::size_t k = 0; k < 8; k += 2) {
      const double x = coords[k], y = coords[k + 1];
      if (x < gt.box.x_min - 2.0 || x > gt.box.x_max + 2.0 || y < gt.box.y_min - 2.0 ||
          y > gt.box.y_max + 2.0) {
        ++report.box_slack_warnings;
        report.warnings.push_back("line " + std::to_string(line_no) +
                                  ": RECIST endpoint outside gt_box by more than 2 px");
        break;
      }
    }
    if (!center_within_segments(*gt.recist)) {
      ++report.center_outside_warnings;
      report.warnings.push_back("line " + std::to_string(line_no) +
                                ": diameter crossing falls outside a segment extent");
    }

    auto [it, inserted] = index_by_id.try_emplace(image_id, records.size());
    if (inserted) records.push_back(ImageRecord{image_id, {}, {}});
    records[it->second].gts.push_back(std::move(gt));
    ++report.rows_loaded;
  }
  return records;
}

DetectionLoadReport load_detections(const std::string& path,
                                    std::vector<ImageRecord>& records) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open detections file: " + path);

  std::unordered_map<std::string, std::size_t> index_by_id;
  for (std::size_t i = 0; i < records.size(); ++i) index_by_id[records[i].image_id] = i;

  DetectionLoadReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("bad JSON: ") + e.what());
    }

    Detection det;
    std::string image_id;
    try {
      image_id = j.at("image_id").get<std::string>();
      const auto box = j.at("box").get<std::vector<double>>();
      if (box.size() != 4) throw std::runtime_error("box must have 4 values");
      det.box = BBox{box[0], box[1], box[2], box[3]};
      det.score_s1 = j.at("score").get<double>();
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!det.box.valid()) throw ParseError(line_no, "degenerate detection box");
    if (det.score_s1 < 0.0 || det.score_s1 > 1.0)
      throw ParseError(line_no, "score outside [0, 1]");

    if (j.contains("mask_rle") && !j["mask_rle"].is_null()) {
      try {
        det.mask = decode_rle(j["mask_rle"].get<std::string>());
      } catch (const RleLengthMismatch& e) {
        throw RleLengthMismatch("line " + std::to_string(line_no) + ": " + e.what());
      }
    }

    auto it = index_by_id.find(image_id);
    if (it == index_by_id.end()) {
      report.orphan_image_ids.push_back(image_id);
      continue;
    }
    records[it->second].dets.push_back(std::move(det));
    ++report.entries_loaded;
  }
  return report;
}

void ensure_pseudo_masks(std::vector<ImageRecord>& records, parallel::Exec exec) {
  std::vector<GroundTruth*> pending;
  for (auto& img : records)
    for (auto& gt : img.gts)
      if (!gt.pseudo_mask && gt.recist) pending.push_back(&gt);

  parallel::for_each_index(pending.size(), exec, [&](std::size_t i) {
    pending[i]->pseudo_mask = rasterize_pseudo_mask(*pending[i]->recist);
  });
}

std::string encode_rle(const BinaryMask& mask) {
  std::string out = std::to_string(mask.origin_x) + " " + std::to_string(mask.origin_y) + " " +
                    std::to_string(mask.width) + " " + std::to_string(mask.height);
  std::uint8_t cur = 0;  // runs start with the background count
  std::int64_t run = 0;
  for (std::uint8_t b : mask.bits) {
    const std::uint8_t v = b ? 1 : 0;
    if (v == cur) {
      ++run;
    } else {
      out += " " + std::to_string(run);
      cur = v;
      run = 1;
    }
  }
  out += " " + std::to_string(run);
  return out;
}

BinaryMask decode_rle(const std::string& text) {
  std::istringstream ss(text);
  BinaryMask m;
  if (!(ss >> m.origin_x >> m.origin_y >> m.width >> m.height))
    throw RleLengthMismatch("bad RLE header");
  if (m.width <= 0 || m.height <= 0) throw RleLengthMismatch("non-positive RLE window size");

  const std::size_t total = static_cast<std::size_t>(m.width * m.height);
  m.bits.assign(total, 0);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  std::int64_t run;
  while (ss >> run) {
    if (run < 0 || pos + static_cast<std::size_t>(run) > total)
      throw RleLengthMismatch("RLE runs exceed width*height");
    for (std::int64_t k = 0; k < run; ++k) m.bits[pos++] = value;
    value = value ? 0 : 1;
  }
  if (pos != total) throw RleLengthMismatch("RLE runs do not cover width*height");
  return m;
}

void write_annotations_csv(const std::string& path, const std::vector<AnnotationRow>& rows) {
  auto f = open_out(path);
  f << "image_id,measurement_coordinates,bounding_box,split\n";
  for (const auto& row : rows) {
    f << row.image_id << ",\"" << format_float_list(row.recist_coords.data(), 8) << "\",\""
      << format_float_list(row.gt_box.data(), 4) << "\"," << to_string(row.split) << "\n";
  }
}

void write_detections_jsonl(const std::string& path,
                            const std::vector<DetectionFileEntry>& entries) {
  auto f = open_out(path);
  for (const auto& e : entries) {
    json j;
    j["image_id"] = e.image_id;
    j["box"] = e.box;
    j["score"] = e.score;
    if (e.mask_rle) j["mask_rle"] = *e.mask_rle;
    f << j.dump() << "\n";
  }
}

void write_froc_csv(const std::string& path, const FrocCurve& curve) {
  auto f = open_out(path);
  f << "threshold,avg_fp_per_image,sensitivity\n";
  for (const auto& p : curve.points)
    f << fmt(p.threshold) << "," << fmt(p.avg_fp_per_image) << "," << fmt(p.sensitivity) << "\n";
}

void write_operating_points_csv(const std::string& path,
                                const std::vector<double>& afp_targets,
                                const std::vector<OperatingPoint>& points) {
  auto f = open_out(path);
  f << "afp_target,sensitivity,saturated\n";
  for (std::size_t i = 0; i < afp_targets.size(); ++i) {
    f << fmt(afp_targets[i]) << "," << fmt(points[i].sensitivity) << ","
      << (points[i].saturated ? "true" : "false") << "\n";
  }
}

void write_mining_jsonl(const std::string& path,
                        const std::vector<std::pair<std::string, MiningOutcome>>& outcomes) {
  auto f = open_out(path);
  for (const auto& [image_id, outcome] : outcomes) {
    json j;
    j["image_id"] = image_id;
    j["branch"] = to_string(outcome.branch);
    if (outcome.anchor)
      j["anchor"] = *outcome.anchor;
    else
      j["anchor"] = nullptr;
    j["mined"] = outcome.mined;
    f << j.dump() << "\n";
  }
}

}  // namespace recist_kit::io
