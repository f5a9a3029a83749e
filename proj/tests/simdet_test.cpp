#include <gtest/gtest.h>

#include <vector>

#include "pad/harness.hpp"
#include "pad/simdet.hpp"
#include "pad/stats.hpp"

namespace pad {
namespace {

const FrameSpec kFull{300.0};

GroundTruthFrame two_objects() {
  return GroundTruthFrame{7, {{1, Rect{100, 120, 180, 180}}, {2, Rect{10, 200, 40, 260}}}};
}

TEST(OracleDetect, FullViewWithoutNoiseIsExact) {
  const auto gt = two_objects();
  const auto noise = NoiseModel::disabled();
  auto dets = oracle_detect(View{FullView{kFull}}, gt, kFull, noise);
  ASSERT_EQ(dets.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(dets[j].rect, gt.objects[j].rect);
    EXPECT_EQ(dets[j].class_id, gt.objects[j].class_id);
    EXPECT_DOUBLE_EQ(dets[j].confidence, noise.base_conf(area(gt.objects[j].rect) / kFull.area()));
  }
}

TEST(OracleDetect, ReducedViewRoundTripsThroughMapBack) {
  const auto gt = two_objects();
  auto plan = pack(std::vector<Rect>{gt.objects[0].rect}, kFull, FrameSpec(150));
  ASSERT_TRUE(plan);
  auto dets = oracle_detect(View{ReducedView{&*plan}}, gt, kFull, NoiseModel::disabled());
  // second object's center lies outside the only slot
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].rect, (Rect{35, 45, 115, 105}));
  auto back = map_back(dets, *plan);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].rect, gt.objects[0].rect);
}

TEST(OracleDetect, CenterOutsideSlotsIsInvisible) {
  GroundTruthFrame gt{0, {{0, Rect{0, 0, 100, 100}}}};
  PackPlan plan{{PackSlot{Rect{60, 60, 120, 120}, Rect{0, 0, 60, 60}, 1, 1}}, FrameSpec(150), PackMethod::Greedy,
                std::nullopt};
  EXPECT_TRUE(oracle_detect(View{ReducedView{&plan}}, gt, kFull, NoiseModel::disabled()).empty());
}

TEST(OracleDetect, Deterministic) {
  const auto gt = two_objects();
  NoiseModel noise;
  noise.seed = 42;
  auto a = oracle_detect(View{FullView{kFull}}, gt, kFull, noise, 3);
  auto b = oracle_detect(View{FullView{kFull}}, gt, kFull, noise, 3);
  EXPECT_EQ(a, b);
  auto c = oracle_detect(View{FullView{kFull}}, gt, kFull, noise, 4);
  EXPECT_NE(a, c);
  for (const auto& d : a) EXPECT_TRUE(d.valid());
}

TEST(NoiseModel, ScalePenaltyAndMonotoneMargin) {
  NoiseModel noise;
  EXPECT_EQ(noise.scale_multiplier(1.0, 1.0), 1.0);
  EXPECT_LT(noise.scale_multiplier(0.5, 1.0), 1.0);
  EXPECT_LE(noise.scale_multiplier(0.4, 1.0), noise.scale_multiplier(0.5, 1.0));

  // Expected confidence over many seeds never rises as the slot margin shrinks.
  GroundTruthFrame gt{0, {{0, Rect{140, 140, 160, 160}}}};
  auto expected_conf = [&](double margin) {
    PackPlan plan{{PackSlot{Rect{140 - margin, 140 - margin, 160 + margin, 160 + margin},
                            Rect{0, 0, 20 + 2 * margin, 20 + 2 * margin}, 1, 1}},
                  FrameSpec(150), PackMethod::Greedy, std::nullopt};
    double total = 0.0;
    for (std::uint64_t s = 0; s < 400; ++s) {
      NoiseModel n;
      n.seed = s;
      for (const auto& d : oracle_detect(View{ReducedView{&plan}}, gt, kFull, n)) total += d.confidence;
    }
    return total / 400.0;
  };
  double prev = 0.0;
  for (double m : {0.0, 2.0, 4.0, 7.9, 8.0, 20.0, 60.0}) {
    const double c = expected_conf(m);
    EXPECT_GE(c, prev) << "margin " << m;
    prev = c;
  }
}

TEST(NoiseModel, Validation) {
  NoiseModel n;
  n.miss_probability = 1.5;
  EXPECT_THROW(n.validate(), std::invalid_argument);
  n = NoiseModel{};
  n.loc_sigma = -1;
  EXPECT_THROW(n.validate(), std::invalid_argument);
}

TEST(GenSynthetic, DeterministicGivenSeed) {
  SyntheticParams p;
  p.videos = 4;
  p.frames_per_video = 30;
  p.seed = 7;
  EXPECT_EQ(gen_synthetic(p), gen_synthetic(p));
  auto q = p;
  q.seed = 8;
  EXPECT_NE(gen_synthetic(p), gen_synthetic(q));
}

TEST(GenSynthetic, FramesInsideAndOrdered) {
  SyntheticParams p;
  p.videos = 20;
  p.frames_per_video = 50;
  p.max_speed = 4.0;
  p.jitter_sigma = 1.0;
  for (const auto& v : gen_synthetic(p)) {
    EXPECT_NO_THROW(check_frame_order(v));
    for (const auto& f : v.frames) {
      for (const auto& o : f.objects) {
        ASSERT_TRUE(o.rect.valid());
        ASSERT_TRUE(kFull.bounds().contains(o.rect));
      }
    }
  }
}

TEST(GenSynthetic, StaticVideosRepeatFrames) {
  SyntheticParams p;
  p.videos = 5;
  p.frames_per_video = 20;
  p.max_speed = 0.0;
  p.jitter_sigma = 0.0;
  for (const auto& v : gen_synthetic(p)) {
    for (std::size_t i = 1; i < v.frames.size(); ++i) {
      EXPECT_EQ(v.frames[i].objects, v.frames[0].objects);
      EXPECT_EQ(temporal_region_iou(v.frames[i - 1], v.frames[i]), 1.0);
    }
  }
}

TEST(GenSynthetic, MatchesOccupancyAndTemporalTargets) {
  SyntheticParams p;
  p.videos = 200;
  p.frames_per_video = 100;
  p.seed = 1;
  auto videos = gen_synthetic(p);
  auto s = dataset_stats(videos, kFull);
  EXPECT_NEAR(s.mean_occupancy, 0.227, 0.03);
  EXPECT_GE(s.mean_temporal_iou, 0.90);
}

TEST(GenSynthetic, RejectsBadParams) {
  SyntheticParams p;
  p.occupancy_target = 1.5;
  EXPECT_THROW(gen_synthetic(p), std::invalid_argument);
  p = SyntheticParams{};
  p.min_objects = 3;
  p.max_objects = 2;
  EXPECT_THROW(gen_synthetic(p), std::invalid_argument);
  p = SyntheticParams{};
  p.occupancy_shape = 0.0;
  EXPECT_THROW(gen_synthetic(p), std::invalid_argument);
}

TEST(GenSynthetic, OccupancyMeanHoldsAcrossShapes) {
  for (double shape : {0.6, 1.0, 2.0}) {
    SyntheticParams p;
    p.videos = 200;
    p.frames_per_video = 2;
    p.occupancy_shape = shape;
    auto s = dataset_stats(gen_synthetic(p), kFull);
    EXPECT_NEAR(s.mean_occupancy, 0.227, 0.015) << "shape " << shape;
  }
}

TEST(SimulatedPipeline, StaticSceneIsLossless) {
  SyntheticParams p;
  p.videos = 30;
  p.frames_per_video = 25;
  p.max_speed = 0.0;
  p.jitter_sigma = 0.0;
  p.seed = 3;
  auto videos = gen_synthetic(p);
  PipelineConfig pad_cfg;
  PipelineConfig base_cfg;
  base_cfg.mode = Mode::Baseline;
  const auto noise = NoiseModel::disabled();
  const auto cost = CostParams::quadratic(300, 150);
  auto pad_run = run_dataset(videos, pad_cfg, noise, cost);
  auto base_run = run_dataset(videos, base_cfg, noise, cost);
  std::size_t packed = 0;
  for (std::size_t v = 0; v < videos.size(); ++v) {
    for (std::size_t i = 0; i < videos[v].frames.size(); ++i) {
      const auto& a = pad_run.videos[v].frames[i].detections;
      const auto& b = base_run.videos[v].frames[i].detections;
      packed += kind(pad_run.videos[v].frames[i].decision) == DecisionKind::Packed;
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].class_id, b[k].class_id);
        EXPECT_EQ(a[k].confidence, b[k].confidence);
        EXPECT_NEAR(a[k].rect.x_min, b[k].rect.x_min, 1e-9);
        EXPECT_NEAR(a[k].rect.y_min, b[k].rect.y_min, 1e-9);
        EXPECT_NEAR(a[k].rect.x_max, b[k].rect.x_max, 1e-9);
        EXPECT_NEAR(a[k].rect.y_max, b[k].rect.y_max, 1e-9);
      }
    }
  }
  EXPECT_GT(packed, 0u);
  EXPECT_EQ(pad_run.eval.map, base_run.eval.map);
}

}  // namespace
}  // namespace pad
