#include <doctest.h>

#include "oracles.hpp"
#include "recist_kit/froc.hpp"
#include "recist_kit/rng.hpp"

using namespace recist_kit;

namespace {

Detection det_at(const BBox& box, double score) {
  Detection d;
  d.box = box;
  d.score_s1 = score;
  return d;
}

GroundTruth gt_at(const BBox& box) {
  GroundTruth g;
  g.box = box;
  return g;
}

// img1: TP@0.9 + FP@0.8; img2: FP@0.95 + TP@0.6. Hand enumeration:
//   t=0.95: 0 TP, 1 FP -> sens 0,   afp 0.5
//   t=0.90: 1 TP, 1 FP -> sens 0.5, afp 0.5
//   t=0.80: 1 TP, 2 FP -> sens 0.5, afp 1.0
//   t=0.60: 2 TP, 2 FP -> sens 1.0, afp 1.0
std::vector<ImageRecord> two_image_fixture() {
  const BBox gt1{0, 0, 10, 10};
  const BBox gt2{100, 100, 120, 120};
  const BBox far_off{200, 200, 210, 210};
  ImageRecord img1{"img1", {gt_at(gt1)}, {det_at(gt1, 0.9), det_at(far_off, 0.8)}};
  ImageRecord img2{"img2", {gt_at(gt2)}, {det_at(far_off, 0.95), det_at(gt2, 0.6)}};
  return {img1, img2};
}

std::vector<ImageRecord> random_dataset(rng::Engine& eng, std::size_t max_images,
                                        std::size_t max_dets) {
  const std::size_t n_images = 1 + rng::next_below(eng, max_images);
  std::vector<ImageRecord> dataset;
  for (std::size_t i = 0; i < n_images; ++i) {
    ImageRecord img;
    img.image_id = "img" + std::to_string(i);
    const std::size_t n_gts = 1 + rng::next_below(eng, 4);
    for (std::size_t g = 0; g < n_gts; ++g) {
      const double x = 100.0 * rng::next_unit(eng);
      const double y = 100.0 * rng::next_unit(eng);
      img.gts.push_back(gt_at(BBox{x, y, x + 5 + 15 * rng::next_unit(eng),
                                   y + 5 + 15 * rng::next_unit(eng)}));
    }
    const std::size_t n_dets = rng::next_below(eng, max_dets + 1);
    for (std::size_t d = 0; d < n_dets; ++d) {
      // Half near a GT, half anywhere; quantized scores force threshold ties.
      BBox box;
      if (rng::next_below(eng, 2) == 0 && !img.gts.empty()) {
        const auto& gt = img.gts[rng::next_below(eng, img.gts.size())].box;
        const double dx = -4 + 8 * rng::next_unit(eng);
        const double dy = -4 + 8 * rng::next_unit(eng);
        box = BBox{gt.x_min + dx, gt.y_min + dy, gt.x_max + dx, gt.y_max + dy};
      } else {
        const double x = 100.0 * rng::next_unit(eng);
        const double y = 100.0 * rng::next_unit(eng);
        box = BBox{x, y, x + 5 + 15 * rng::next_unit(eng), y + 5 + 15 * rng::next_unit(eng)};
      }
      const double score = static_cast<double>(rng::next_below(eng, 20)) / 20.0 + 0.025;
      img.dets.push_back(det_at(box, score));
    }
    dataset.push_back(std::move(img));
  }
  return dataset;
}

}  // namespace

TEST_CASE("perfect detector reaches sensitivity 1 at zero FP") {
  std::vector<ImageRecord> dataset;
  for (int i = 0; i < 3; ++i) {
    const BBox box{10.0 * i, 0, 10.0 * i + 8, 8};
    dataset.push_back({"img" + std::to_string(i), {gt_at(box)}, {det_at(box, 1.0)}});
  }
  const auto curve = compute_froc(dataset, 0.5);
  REQUIRE(curve.points.size() == 1);
  CHECK(curve.points[0].sensitivity == doctest::Approx(1.0));
  CHECK(curve.points[0].avg_fp_per_image == 0.0);
  CHECK(sensitivity_at(curve, 0.5).sensitivity == doctest::Approx(1.0));
}

TEST_CASE("hand-enumerated two-image sweep") {
  const auto curve = compute_froc(two_image_fixture(), 0.5);
  REQUIRE(curve.points.size() == 4);

  CHECK(curve.points[0].threshold == doctest::Approx(0.95));
  CHECK(curve.points[0].sensitivity == doctest::Approx(0.0));
  CHECK(curve.points[0].avg_fp_per_image == doctest::Approx(0.5));

  CHECK(curve.points[1].threshold == doctest::Approx(0.9));
  CHECK(curve.points[1].sensitivity == doctest::Approx(0.5));
  CHECK(curve.points[1].avg_fp_per_image == doctest::Approx(0.5));

  CHECK(curve.points[2].threshold == doctest::Approx(0.8));
  CHECK(curve.points[2].sensitivity == doctest::Approx(0.5));
  CHECK(curve.points[2].avg_fp_per_image == doctest::Approx(1.0));

  CHECK(curve.points[3].threshold == doctest::Approx(0.6));
  CHECK(curve.points[3].sensitivity == doctest::Approx(1.0));
  CHECK(curve.points[3].avg_fp_per_image == doctest::Approx(1.0));
}

TEST_CASE("operating-point readout on the two-image fixture") {
  const auto curve = compute_froc(two_image_fixture(), 0.5);
  CHECK(sensitivity_at(curve, 0.5).sensitivity == doctest::Approx(0.5));
  CHECK_FALSE(sensitivity_at(curve, 0.5).saturated);
  CHECK(sensitivity_at(curve, 1.0).sensitivity == doctest::Approx(1.0));
  CHECK_FALSE(sensitivity_at(curve, 1.0).saturated);

  // Curve terminates at afp 1.0: queries beyond it report saturation.
  const auto op = sensitivity_at(curve, 8.0);
  CHECK(op.saturated);
  CHECK(op.sensitivity == doctest::Approx(1.0));

  // A curve that starts above the target yields 0 without saturation.
  FrocCurve high_only;
  high_only.points = {{0.5, 3.0, 0.4}, {0.2, 6.0, 0.8}};
  const auto below = sensitivity_at(high_only, 1.0);
  CHECK(below.sensitivity == 0.0);
  CHECK_FALSE(below.saturated);
}

TEST_CASE("compute_froc requires ground truth") {
  std::vector<ImageRecord> dataset{{"img0", {}, {det_at(BBox{0, 0, 5, 5}, 0.5)}}};
  CHECK_THROWS_AS(compute_froc(dataset, 0.5), NoGroundTruth);
}

TEST_CASE("curve invariants along the sweep") {
  rng::Engine eng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dataset = random_dataset(eng, 10, 8);
    const auto curve = compute_froc(dataset, 0.5);
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
      CHECK(curve.points[k].threshold < curve.points[k - 1].threshold);
      CHECK(curve.points[k].avg_fp_per_image >= curve.points[k - 1].avg_fp_per_image);
      CHECK(curve.points[k].sensitivity >= curve.points[k - 1].sensitivity);
    }
    // sensitivity_at is non-decreasing in the target.
    double prev = -1.0;
    for (double target : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double s = sensitivity_at(curve, target).sensitivity;
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("compute_froc equals the brute-force threshold re-evaluation") {
  rng::Engine eng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const auto dataset = random_dataset(eng, 20, 10);
    const auto fast = compute_froc(dataset, 0.5);
    const auto slow = oracles::brute_force_froc(dataset, 0.5);
    REQUIRE(fast.points.size() == slow.points.size());
    for (std::size_t k = 0; k < fast.points.size(); ++k) {
      CHECK(fast.points[k].threshold == slow.points[k].threshold);
      CHECK(fast.points[k].avg_fp_per_image == slow.points[k].avg_fp_per_image);
      CHECK(fast.points[k].sensitivity == slow.points[k].sensitivity);
    }
  }
}

TEST_CASE("serial and parallel execution agree exactly") {
  rng::Engine eng(29);
  const auto dataset = random_dataset(eng, 20, 10);
  const auto par = compute_froc(dataset, 0.5, parallel::Exec::Parallel);
  const auto ser = compute_froc(dataset, 0.5, parallel::Exec::Serial);
  REQUIRE(par.points.size() == ser.points.size());
  for (std::size_t k = 0; k < par.points.size(); ++k) {
    CHECK(par.points[k].threshold == ser.points[k].threshold);
    CHECK(par.points[k].avg_fp_per_image == ser.points[k].avg_fp_per_image);
    CHECK(par.points[k].sensitivity == ser.points[k].sensitivity);
  }
}
