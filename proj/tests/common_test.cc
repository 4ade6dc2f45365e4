#include <gtest/gtest.h>

#include <atomic>
#include <numbers>
#include <random>
#include <set>

#include "sdfloc/block_grid.h"
#include "sdfloc/parallel.h"
#include "sdfloc/rigid_transform.h"
#include "test_util.h"

namespace sdfloc {
namespace {

TEST(VoxelKeyTest, RoundTripsAcrossSignsAndRange) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int32_t> c(-(1 << 20) + 1, (1 << 20) - 1);
  std::set<uint64_t> keys;
  for (int i = 0; i < 20000; ++i) {
    const VoxelIndex v{c(rng), c(rng), c(rng)};
    EXPECT_EQ(VoxelFromKey(VoxelKey(v)), v);
    keys.insert(VoxelKey(v));
  }
  EXPECT_GT(keys.size(), 19990u);
  for (int x = -2; x <= 2; ++x) {
    for (int y = -2; y <= 2; ++y) {
      for (int z = -2; z <= 2; ++z) {
        EXPECT_EQ(VoxelFromKey(VoxelKey({x, y, z})), (VoxelIndex{x, y, z}));
      }
    }
  }
}

TEST(VoxelCenterTest, CenterOfVoxelConvention) {
  const Vec3 c = VoxelCenter({0, -1, 2}, 0.1);
  EXPECT_NEAR(c.x(), 0.05, 1e-15);
  EXPECT_NEAR(c.y(), -0.05, 1e-15);
  EXPECT_NEAR(c.z(), 0.25, 1e-15);
  EXPECT_EQ(VoxelContaining(c, 0.1), (VoxelIndex{0, -1, 2}));
  EXPECT_EQ(VoxelContaining(Vec3(-1e-9, 0.0, 0.0999), 0.1), (VoxelIndex{-1, 0, 0}));
}

TEST(RigidTransformTest, RejectsNonRotation) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = -1.0;  // reflection
  EXPECT_THROW(RigidTransform(m, Vec3::Zero()), Error);
  m = Mat3::Identity() * 1.001;
  EXPECT_THROW(RigidTransform(m, Vec3::Zero()), Error);
}

TEST(RigidTransformTest, InverseAndComposition) {
  std::mt19937_64 rng(2);
  const RigidTransform a(testing::RandomRotation(rng), Vec3(1, -2, 3));
  const RigidTransform b(testing::RandomRotation(rng), Vec3(-0.5, 0.2, 0.1));
  const Vec3 p(0.3, 0.4, -0.7);
  EXPECT_LT(((a * b) * p - a * (b * p)).norm(), 1e-12);
  EXPECT_LT((a.Inverse() * (a * p) - p).norm(), 1e-12);
  EXPECT_NEAR(a.RotationAngleTo(a), 0.0, 1e-7);
  const RigidTransform yaw =
      RigidTransform::FromYawPitchRoll(std::numbers::pi / 2, 0, 0, Vec3::Zero());
  EXPECT_LT((yaw * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm(), 1e-12);
  EXPECT_NEAR(yaw.RotationAngleTo(RigidTransform()), std::numbers::pi / 2, 1e-9);
}

TEST(BlockGridTest, StoresAndIteratesInCanonicalOrder) {
  BlockGrid<double> g;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-30, 30);
  std::set<VoxelIndex> truth;
  for (int i = 0; i < 3000; ++i) {
    const VoxelIndex v{c(rng), c(rng), c(rng)};
    g.Set(v, v.x + 0.5);
    truth.insert(v);
  }
  EXPECT_EQ(g.size(), truth.size());
  const std::vector<VoxelIndex> sorted = g.SortedVoxels();
  EXPECT_TRUE(std::equal(sorted.begin(), sorted.end(), truth.begin(), truth.end()));
  for (const VoxelIndex& v : truth) {
    ASSERT_NE(g.Find(v), nullptr);
    EXPECT_EQ(*g.Find(v), v.x + 0.5);
  }
  EXPECT_EQ(g.Find({100, 100, 100}), nullptr);

  std::vector<VoxelIndex> visited;
  g.ForEach([&](const VoxelIndex& v, const double&) { visited.push_back(v); });
  std::vector<VoxelIndex> again;
  g.ForEach([&](const VoxelIndex& v, const double&) { again.push_back(v); });
  EXPECT_EQ(visited, again);
  EXPECT_EQ(visited.size(), truth.size());

  BlockGrid<double> copy = g;
  EXPECT_TRUE(copy.SameDomain(g));
  copy.Set({100, 100, 100}, 1.0);
  EXPECT_FALSE(copy.SameDomain(g));
}

TEST(BlockGridTest, SphereVisitMatchesBruteForce) {
  BlockGrid<int> g;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> c(-20, 20);
  for (int i = 0; i < 4000; ++i) g.Set({c(rng), c(rng), c(rng)}, i);
  const VoxelIndex center{3, -2, 5};
  const double r = 7.5;
  std::set<VoxelIndex> expected;
  g.ForEach([&](const VoxelIndex& v, const int&) {
    const VoxelIndex o = v - center;
    if (o.x * o.x + o.y * o.y + o.z * o.z <= r * r) expected.insert(v);
  });
  std::set<VoxelIndex> got;
  ForEachInSphere(g, center, r, [&](const VoxelIndex& o, const int&) {
    EXPECT_TRUE(got.insert(center + o).second);
  });
  EXPECT_EQ(got, expected);
}

TEST(ParallelTest, CoversEveryIndexOnceAndPropagatesErrors) {
  for (int threads : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(1000);
    ParallelFor(hits.size(), threads, [&](size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  EXPECT_THROW(ParallelFor(10, 4,
                           [](size_t i) {
                             if (i == 7) throw Error(ErrorCode::kDegenerate, "x");
                           }),
               Error);
}

}  // namespace
}  // namespace sdfloc
