#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "pad/stats.hpp"

namespace pad {
namespace {

const FrameSpec kFull{300.0};

GroundTruthFrame frame_of(std::vector<Rect> rs) {
  GroundTruthFrame f;
  for (const Rect& r : rs) f.objects.push_back({0, r});
  return f;
}

TEST(Occupancy, Fixtures) {
  EXPECT_EQ(occupancy_ratio(GroundTruthFrame{}, kFull), 0.0);
  EXPECT_EQ(occupancy_ratio(frame_of({{0, 0, 150, 150}, {150, 150, 300, 300}}), kFull), 0.5);
  EXPECT_EQ(occupancy_ratio(frame_of({{0, 0, 150, 150}, {0, 0, 150, 150}}), kFull), 0.25);
}

TEST(TemporalIou, Fixtures) {
  auto a = frame_of({{0, 0, 100, 100}});
  auto b = frame_of({{10, 0, 110, 100}});
  EXPECT_EQ(temporal_region_iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(temporal_region_iou(a, b), 9.0 / 11.0);
  EXPECT_EQ(temporal_region_iou(a, frame_of({{200, 200, 250, 250}})), 0.0);
  EXPECT_EQ(temporal_region_iou(GroundTruthFrame{}, GroundTruthFrame{}), 1.0);
  EXPECT_EQ(temporal_region_iou(a, GroundTruthFrame{}), 0.0);
}

TEST(TemporalIouProperty, SymmetricAndMatchesRasterization) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> count(1, 5);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rect> ra, rb;
    for (int i = count(rng); i > 0; --i) ra.push_back(oracle::random_rect(rng, 300, 20, 150));
    for (int i = count(rng); i > 0; --i) rb.push_back(oracle::random_rect(rng, 300, 20, 150));
    auto a = frame_of(ra), b = frame_of(rb);
    const double exact = temporal_region_iou(a, b);
    ASSERT_DOUBLE_EQ(exact, temporal_region_iou(b, a));
    const double raster = oracle::raster_region_iou(ra, rb);
    ASSERT_NEAR(raster, exact, std::max(0.01 * exact, 1e-3)) << "instance " << t;
  }
}

TEST(OccupancyProperty, DisjointBoxesSumAreas) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 500; ++t) {
    std::vector<Rect> rs;
    for (int i = 0; i < 6; ++i) {
      Rect r = oracle::random_rect(rng, 300, 5, 200);
      bool clear = true;
      for (const Rect& o : rs) clear = clear && !intersects(o, r);
      if (clear) rs.push_back(r);
    }
    double sum = 0.0;
    for (const Rect& r : rs) sum += area(r);
    auto f = frame_of(rs);
    ASSERT_NEAR(occupancy_ratio(f, kFull), sum / kFull.area(), 1e-12);
    ASSERT_LE(occupancy_ratio(f, kFull), 1.0);
  }
}

TEST(Histogram, Binning) {
  std::vector<double> v{0.1, 0.1, 0.9};
  auto h = histogram(v, 2, 0.0, 1.0);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(h.rejected, 0u);

  auto empty = histogram(std::vector<double>{}, 4, 0.0, 1.0);
  EXPECT_EQ(empty.counts, (std::vector<std::size_t>(4, 0)));

  std::vector<double> edges{0.0, 0.5, 1.0, -0.1, 1.2};
  auto e = histogram(edges, 2, 0.0, 1.0);
  EXPECT_EQ(e.counts, (std::vector<std::size_t>{1, 2}));  // 0.5 opens the second bin; 1.0 closes it
  EXPECT_EQ(e.rejected, 2u);
  EXPECT_DOUBLE_EQ(e.bin_left(1), 0.5);
  EXPECT_DOUBLE_EQ(e.bin_right(1), 1.0);

  EXPECT_THROW(histogram(v, 0, 0.0, 1.0), std::invalid_argument);
}

TEST(DatasetStats, Means) {
  Video v{"a", {frame_of({{0, 0, 100, 100}}), frame_of({{10, 0, 110, 100}})}};
  v.frames[1].frame_id = 1;
  std::vector<Video> vs{v};
  auto s = dataset_stats(vs, kFull);
  EXPECT_DOUBLE_EQ(s.mean_temporal_iou, 9.0 / 11.0);
  EXPECT_DOUBLE_EQ(s.mean_occupancy, 10000.0 / 90000.0);
  EXPECT_THROW(dataset_stats(std::vector<Video>{}, kFull), std::invalid_argument);
}

}  // namespace
}  // namespace pad
