#include "recist_kit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "recist_kit/rng.hpp"

namespace recist_kit::synth {

namespace {

constexpr double kDisjointIou = 0.1;
constexpr int kMaxPlacementAttempts = 1000;

double uniform_in(rng::Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * rng::next_unit(eng);
}

BBox tight_bit_bbox(const BinaryMask& m) {
  std::int64_t min_x = m.width, min_y = m.height, max_x = -1, max_y = -1;
  for (std::int64_t y = 0; y < m.height; ++y)
    for (std::int64_t x = 0; x < m.width; ++x)
      if (m.at(x, y)) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
      }
  return BBox{static_cast<double>(m.origin_x + min_x), static_cast<double>(m.origin_y + min_y),
              static_cast<double>(m.origin_x + max_x + 1),
              static_cast<double>(m.origin_y + max_y + 1)};
}

}  // namespace

void SynthConfig::validate() const {
  const auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (n_images == 0) fail("n_images must be positive");
  if (lesions_min < 0 || lesions_max < lesions_min) fail("bad lesions_per_image range");
  if (image_size <= 0) fail("image_size must be positive");
  if (arm_min <= 0.0 || arm_max < arm_min) fail("bad arm length range");
  if (4.0 * arm_max + 8.0 > image_size) fail("image_size too small for arm_max");
  if (tp_score_std < 0.0 || fp_score_std < 0.0) fail("score std must be >= 0");
  if (fp_per_image_rate < 0.0) fail("fp_per_image_rate must be >= 0");
  if (jitter_px < 0.0) fail("jitter_px must be >= 0");
  if (mask_noise < 0.0 || mask_noise > 1.0) fail("mask_noise must be in [0, 1]");
}

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);

  SynthConfig cfg;
  std::unordered_map<std::string, double*> dfields{
      {"arm_min", &cfg.arm_min},
      {"arm_max", &cfg.arm_max},
      {"tp_score_mean", &cfg.tp_score_mean},
      {"tp_score_std", &cfg.tp_score_std},
      {"fp_per_image_rate", &cfg.fp_per_image_rate},
      {"fp_score_mean", &cfg.fp_score_mean},
      {"fp_score_std", &cfg.fp_score_std},
      {"jitter_px", &cfg.jitter_px},
      {"mask_noise", &cfg.mask_noise},
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.front() == '[') continue;  // table headers carry no data here

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    try {
      if (key == "n_images")
        cfg.n_images = std::stoull(value);
      else if (key == "lesions_min")
        cfg.lesions_min = std::stoi(value);
      else if (key == "lesions_max")
        cfg.lesions_max = std::stoi(value);
      else if (key == "image_size")
        cfg.image_size = std::stoi(value);
      else if (auto it = dfields.find(key); it != dfields.end())
        *it->second = std::stod(value);
      else
        throw ParseError(line_no, "unknown config key '" + key + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad value for '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SynthOutput generate(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  rng::Engine eng(seed);
  SynthOutput out;

  for (std::uint64_t i = 0; i < config.n_images; ++i) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "img_%06llu", static_cast<unsigned long long>(i));
    const std::string image_id = id_buf;

    const int n_lesions =
        config.lesions_min +
        static_cast<int>(rng::next_below(
            eng, static_cast<std::uint64_t>(config.lesions_max - config.lesions_min) + 1));

    std::vector<BBox> gt_boxes;
    std::vector<BinaryMask> gt_masks;
    const double margin = 2.0 * config.arm_max + 2.0;

    for (int l = 0; l < n_lesions; ++l) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
        const double cx = uniform_in(eng, margin, config.image_size - margin);
        const double cy = uniform_in(eng, margin, config.image_size - margin);
        const double angle = 2.0 * M_PI * rng::next_unit(eng);
        const Vec2 dir_long{std::cos(angle), std::sin(angle)};
        const Vec2 dir_short{-dir_long.y, dir_long.x};

        double a1 = uniform_in(eng, config.arm_min, config.arm_max);
        double a2 = uniform_in(eng, config.arm_min, config.arm_max);
        double b1 = uniform_in(eng, config.arm_min, config.arm_max);
        double b2 = uniform_in(eng, config.arm_min, config.arm_max);
        // Long diameter first; the perpendicular pair keeps normalize happy.
        const bool swap_roles = b1 + b2 > a1 + a2;

        const Point2 c{cx, cy};
        Point2 lp1 = c + Vec2{-a1 * dir_long.x, -a1 * dir_long.y};
        Point2 lp2 = c + Vec2{a2 * dir_long.x, a2 * dir_long.y};
        Point2 sp1 = c + Vec2{-b1 * dir_short.x, -b1 * dir_short.y};
        Point2 sp2 = c + Vec2{b2 * dir_short.x, b2 * dir_short.y};
        if (swap_roles) {
          std::swap(lp1, sp1);
          std::swap(lp2, sp2);
        }

        const auto recist = normalize_recist(lp1, lp2, sp1, sp2);
        BinaryMask mask = rasterize_pseudo_mask(recist);
        const BBox box = tight_bit_bbox(mask);

        bool disjoint = true;
        for (const auto& other : gt_boxes) disjoint &= box_iou(box, other) <= kDisjointIou;
        if (!disjoint) continue;

        io::AnnotationRow row;
        row.image_id = image_id;
        row.recist_coords = {recist.long_p1.x,  recist.long_p1.y,  recist.long_p2.x,
                             recist.long_p2.y,  recist.short_p1.x, recist.short_p1.y,
                             recist.short_p2.x, recist.short_p2.y};
        row.gt_box = {box.x_min, box.y_min, box.x_max, box.y_max};
        row.split = io::Split::Train;
        out.annotations.push_back(std::move(row));
        gt_boxes.push_back(box);
        gt_masks.push_back(std::move(mask));
        placed = true;
      }
      if (!placed)
        throw PlacementFailure("could not place lesion " + std::to_string(l) + " in " + image_id);
    }

    // One TP detection per lesion.
    for (std::size_t l = 0; l < gt_boxes.size(); ++l) {
      const double dx = config.jitter_px > 0.0
                            ? uniform_in(eng, -config.jitter_px, config.jitter_px)
                            : 0.0;
      const double dy = config.jitter_px > 0.0
                            ? uniform_in(eng, -config.jitter_px, config.jitter_px)
                            : 0.0;

      io::DetectionFileEntry det;
      det.image_id = image_id;
      det.box = {gt_boxes[l].x_min + dx, gt_boxes[l].y_min + dy, gt_boxes[l].x_max + dx,
                 gt_boxes[l].y_max + dy};
      det.score = rng::next_truncated_normal(eng, config.tp_score_mean, config.tp_score_std,
                                             0.0, 1.0);

      BinaryMask det_mask = gt_masks[l];
      if (config.mask_noise > 0.0) {
        const auto total = det_mask.bits.size();
        const auto flips = static_cast<std::size_t>(std::llround(config.mask_noise *
                                                                static_cast<double>(total)));
        std::vector<std::size_t> all(total);
        for (std::size_t k = 0; k < total; ++k) all[k] = k;
        for (std::size_t k : rng::sample_without_replacement(eng, all, std::min(flips, total)))
          det_mask.bits[k] ^= 1;
      }
      det.mask_rle = io::encode_rle(det_mask);
      out.detections.push_back(std::move(det));
    }

    // Poisson count of FP detections, each disjoint from every GT box.
    const std::uint64_t n_fp = rng::next_poisson(eng, config.fp_per_image_rate);
    for (std::uint64_t k = 0; k < n_fp; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
        const double w = uniform_in(eng, 2.0 * config.arm_min, 2.0 * config.arm_max);
        const double h = uniform_in(eng, 2.0 * config.arm_min, 2.0 * config.arm_max);
        const double x = uniform_in(eng, 1.0, config.image_size - w - 1.0);
        const double y = uniform_in(eng, 1.0, config.image_size - h - 1.0);
        const BBox box{x, y, x + w, y + h};

        bool disjoint = true;
        for (const auto& gt : gt_boxes) disjoint &= box_iou(box, gt) <= kDisjointIou;
        if (!disjoint) continue;

        io::DetectionFileEntry det;
        det.image_id = image_id;
        det.box = {box.x_min, box.y_min, box.x_max, box.y_max};
        det.score = rng::next_truncated_normal(eng, config.fp_score_mean, config.fp_score_std,
                                               0.0, 1.0);
        out.detections.push_back(std::move(det));
        ++out.generated_fp_count;
        placed = true;
      }
      if (!placed) throw PlacementFailure("could not place a disjoint FP in " + image_id);
    }
  }
  return out;
}

std::vector<ImageRecord> build_records(const SynthOutput& out) {
  std::vector<ImageRecord> records;
  std::unordered_map<std::string, std::size_t> index_by_id;

  for (const auto& row : out.annotations) {
    auto [it, inserted] = index_by_id.try_emplace(row.image_id, records.size());
    if (inserted) records.push_back(ImageRecord{row.image_id, {}, {}});
    GroundTruth gt;
    gt.box = BBox{row.gt_box[0], row.gt_box[1], row.gt_box[2], row.gt_box[3]};
    gt.recist = normalize_recist({row.recist_coords[0], row.recist_coords[1]},
                                 {row.recist_coords[2], row.recist_coords[3]},
                                 {row.recist_coords[4], row.recist_coords[5]},
                                 {row.recist_coords[6], row.recist_coords[7]});
    records[it->second].gts.push_back(std::move(gt));
  }
  for (const auto& e : out.detections) {
    auto it = index_by_id.find(e.image_id);
    if (it == index_by_id.end()) continue;
    Detection det;
    det.box = BBox{e.box[0], e.box[1], e.box[2], e.box[3]};
    det.score_s1 = e.score;
    if (e.mask_rle) det.mask = io::decode_rle(*e.mask_rle);
    records[it->second].dets.push_back(std::move(det));
  }
  return records;
}

}  // namespace recist_kit::synth
