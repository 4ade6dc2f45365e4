#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>
#include <numeric>
#include <random>

#include "sdfloc/descriptor.h"
#include "test_util.h"

namespace sdfloc {
namespace {

constexpr double kPi = std::numbers::pi;

SupportSample Sample(const Vec3& g) {
  SupportSample s;
  s.gradient = g;
  s.gauss_weight = 1.0;
  return s;
}

Vec3 Direction(double azimuth, double polar) {
  return Vec3(std::cos(polar) * std::cos(azimuth), std::cos(polar) * std::sin(azimuth),
              std::sin(polar));
}

// Plain reference: tent weights evaluated directly for every bin.
std::vector<double> OracleHistogram(const std::vector<SupportSample>& samples,
                                    const Mat3& rotation, int n) {
  const double delta = kPi / n;
  std::vector<double> hist(2 * n * n, 0.0);
  for (const SupportSample& s : samples) {
    const Vec3 g = rotation * s.gradient;
    const double mag = g.norm();
    if (mag < 1e-12) continue;
    const double phi = std::atan2(g.y(), g.x());
    const double theta = std::asin(std::clamp(g.z() / mag, -1.0, 1.0));
    for (int a = 0; a < 2 * n; ++a) {
      const double ca = -kPi + (a + 0.5) * delta;
      double d = std::abs(phi - ca);
      d = std::min(d, 2 * kPi - d);
      const double wa = std::max(0.0, 1.0 - d / delta);
      for (int p = 0; p < n; ++p) {
        const double cp = -0.5 * kPi + (p + 0.5) * delta;
        double wp;
        if (p == 0 && theta <= cp) {
          wp = 1.0;
        } else if (p == n - 1 && theta >= cp) {
          wp = 1.0;
        } else {
          wp = std::max(0.0, 1.0 - std::abs(theta - cp) / delta);
        }
        hist[a * n + p] += mag * wa * wp;
      }
    }
  }
  return hist;
}

Lrf IdentityLrf() { return Lrf{}; }

TEST(DescriptorTest, LengthMatchesDefaults) {
  EXPECT_EQ(DescriptorLength(10), 202u);
  const Descriptor d =
      DescribeWithDistance({Sample(Vec3(1, 0, 0))}, IdentityLrf(), 0.1, 2, DescriptorParams{});
  EXPECT_EQ(d.values.size(), 202u);
  EXPECT_DOUBLE_EQ(d.values[200], 1e-7 * 0.1);
  EXPECT_DOUBLE_EQ(d.values[201], 1e-5 * 2);
  EXPECT_FALSE(d.zero_gradient);
}

TEST(HistogramTest, BinCenterAndMidwayDeposits) {
  const int n = 10;
  const double delta = kPi / n;
  const double center_az = -kPi + 3.5 * delta;
  const double center_pol = -0.5 * kPi + 4.5 * delta;
  std::vector<double> h =
      HistogramDeposits({Sample(2.5 * Direction(center_az, center_pol))}, Mat3::Identity(), n);
  for (size_t i = 0; i < h.size(); ++i) {
    EXPECT_NEAR(h[i], i == BinIndex(3, 4, n) ? 2.5 : 0.0, 1e-9);
  }

  h = HistogramDeposits({Sample(Direction(-kPi + 4 * delta, center_pol))}, Mat3::Identity(), n);
  EXPECT_NEAR(h[BinIndex(3, 4, n)], 0.5, 1e-9);
  EXPECT_NEAR(h[BinIndex(4, 4, n)], 0.5, 1e-9);

  // Azimuth wraps between the last and first bins.
  h = HistogramDeposits({Sample(Direction(kPi, center_pol))}, Mat3::Identity(), n);
  EXPECT_NEAR(h[BinIndex(2 * n - 1, 4, n)], 0.5, 1e-9);
  EXPECT_NEAR(h[BinIndex(0, 4, n)], 0.5, 1e-9);

  // Near a pole everything goes to the boundary polar band.
  h = HistogramDeposits({Sample(Direction(center_az, 0.5 * kPi - 0.01))}, Mat3::Identity(), n);
  EXPECT_NEAR(h[BinIndex(3, n - 1, n)], 1.0, 1e-9);
}

TEST(HistogramTest, MatchesOracleAndConservesMass) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int n : {2, 5, 10}) {
    std::vector<SupportSample> s;
    double total = 0.0;
    for (int i = 0; i < 2000; ++i) {
      s.push_back(Sample(Vec3(d(rng), d(rng), d(rng)) * std::abs(d(rng))));
      total += s.back().gradient.norm();
    }
    s.push_back(Sample(Vec3::Zero()));
    const Mat3 r = testing::RandomRotation(rng);
    const std::vector<double> h = HistogramDeposits(s, r, n);
    const std::vector<double> o = OracleHistogram(s, r, n);
    ASSERT_EQ(h.size(), o.size());
    for (size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(h[i], o[i], 1e-9);
    EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), total, 1e-9);
  }
}

TEST(HistogramTest, SolidAnglesCoverTheSphere) {
  for (int n : {2, 4, 10}) {
    const std::vector<double> e = EffectiveBinSolidAngles(n);
    const std::vector<double> g = GeometricBinSolidAngles(n);
    EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0), 4 * kPi, 1e-9);
    EXPECT_NEAR(std::accumulate(g.begin(), g.end(), 0.0), 4 * kPi, 1e-9);
    for (double x : e) EXPECT_GT(x, 0.0);
  }
}

TEST(HistogramTest, UniformDirectionsGiveEqualBins) {
  // Fibonacci lattice: a near-uniform set of 1e6 unit directions.
  const size_t count = 1000000;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<SupportSample> s;
  s.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (i + 0.5) * 2.0 / count;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    s.push_back(Sample(Vec3(r * std::cos(phi), r * std::sin(phi), z)));
  }
  const Descriptor d = DescribeWithDistance(s, IdentityLrf(), 0.0, 0, DescriptorParams{});
  const auto hist_end = d.values.begin() + 200;
  const double lo = *std::min_element(d.values.begin(), hist_end);
  const double hi = *std::max_element(d.values.begin(), hist_end);
  const double mean = std::accumulate(d.values.begin(), hist_end, 0.0) / 200;
  EXPECT_NEAR(mean, 1.0 / (4 * kPi), 1e-3 / (4 * kPi));
  EXPECT_LE((hi - lo) / mean, 0.02);
}

TEST(DescriptorTest, RotationInvariantWithMatchingFrames) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<SupportSample> s;
  for (int i = 0; i < 400; ++i) {
    s.push_back(Sample(Vec3(2 * d(rng) + 1.5, d(rng), 0.4 * d(rng) + 0.3)));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Mat3 q = testing::RandomRotation(rng);
    std::vector<SupportSample> r = s;
    for (SupportSample& x : r) x.gradient = q * x.gradient;
    const LrfAssignment a = AssignLrfs(StructureTensor(s), s, 0.5);
    const LrfAssignment b = AssignLrfs(StructureTensor(r), r, 0.5);
    ASSERT_EQ(a.frames.size(), b.frames.size());
    for (const Lrf& fa : a.frames) {
      // Pair each frame with its rotated counterpart (solver signs are arbitrary).
      const Lrf* fb = nullptr;
      for (const Lrf& f : b.frames) {
        if ((f.rotation - fa.rotation * q.transpose()).norm() < 1e-6) fb = &f;
      }
      ASSERT_NE(fb, nullptr);
      const Descriptor da = DescribeWithDistance(s, fa, 0.05, 1, {});
      const Descriptor db = DescribeWithDistance(r, *fb, 0.05, 1, {});
      EXPECT_LE(DescriptorDistance(da, db), 1e-6);
    }
  }
}

TEST(DescriptorTest, EntriesFiniteAndNonNegative) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<SupportSample> s;
  for (int i = 0; i < 100; ++i) s.push_back(Sample(Vec3(d(rng), d(rng), d(rng))));
  const Descriptor desc = DescribeWithDistance(s, IdentityLrf(), -0.3, 2, {});
  for (size_t i = 0; i < desc.values.size(); ++i) {
    EXPECT_TRUE(std::isfinite(desc.values[i]));
    if (i != 200) EXPECT_GE(desc.values[i], 0.0);
  }
  EXPECT_LT(desc.values[200], 0.0);

  const Descriptor zero =
      DescribeWithDistance({Sample(Vec3::Zero()), Sample(Vec3(1e-14, 0, 0))}, IdentityLrf(),
                           0.1, 1, {});
  EXPECT_TRUE(zero.zero_gradient);
  EXPECT_EQ(zero.values.size(), 202u);
  EXPECT_DOUBLE_EQ(zero.values[201], 1e-5);
}

TEST(DistanceTest, Examples) {
  Descriptor a = DescribeWithDistance({Sample(Vec3(1, 2, 3))}, IdentityLrf(), 0.2, 1, {});
  Descriptor b = DescribeWithDistance({Sample(Vec3(1, 2, 3))}, IdentityLrf(), 0.2, 2, {});
  EXPECT_EQ(DescriptorDistance(a, a), 0.0);
  EXPECT_NEAR(DescriptorDistance(a, b), 1e-5, 1e-18);
  EXPECT_THROW(DescriptorDistance(a.values, std::vector<double>(3)), Error);

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(202), y(202);
    double sq = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      sq += (x[i] - y[i]) * (x[i] - y[i]);
    }
    EXPECT_NEAR(DescriptorDistance(x, y), std::sqrt(sq), 1e-12);
    EXPECT_GE(DescriptorDistance(x, y), 0.0);
  }
}

TEST(DescriptorTest, DumpRoundTrip) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Descriptor> ds(5);
  for (size_t i = 0; i < ds.size(); ++i) {
    ds[i].values.resize(DescriptorLength(4));
    for (double& v : ds[i].values) v = u(rng);
    ds[i].keypoint = {int(i), -int(i), 7};
    ds[i].lrf_ordinal = uint8_t(i % 4);
  }
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "sdfloc_descriptor_dump_test.bin";
  WriteDescriptorDump(ds, 4, path);
  int n = 0;
  const std::vector<Descriptor> back = ReadDescriptorDump(path, &n);
  std::filesystem::remove(path);
  EXPECT_EQ(n, 4);
  ASSERT_EQ(back.size(), ds.size());
  for (size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(back[i].keypoint, ds[i].keypoint);
    EXPECT_EQ(back[i].lrf_ordinal, ds[i].lrf_ordinal);
    for (size_t j = 0; j < ds[i].values.size(); ++j) {
      EXPECT_EQ(back[i].values[j], double(float(ds[i].values[j])));
    }
  }
  ds[0].values.pop_back();
  EXPECT_THROW(WriteDescriptorDump(ds, 4, path), Error);
}

TEST(SupportDistanceTest, NearZeroOnSymmetricSurface) {
  const double vs = 0.05;
  SceneSpec plane;
  Primitive p;
  p.type = PrimitiveType::kPlane;
  plane.primitives = {p};
  plane.bounds = AxisAlignedBox{Vec3::Constant(-1.2), Vec3::Constant(1.2)};
  const SdfSubmap s = BuildSyntheticScene(plane, testing::Raster(vs, 1.0));
  const double b = SupportDistance(s, s.IndexOf(Vec3(0.01, -0.02, 0.0)), 15, 15);
  EXPECT_NEAR(b, 0.0, vs);

  // Every voxel at one distance gives exactly that distance.
  SdfSubmap flat(0, vs, 0.15);
  for (int i = -3; i <= 3; ++i) flat.voxels().Set({i, 0, 0}, {0.125f, 2.f});
  EXPECT_DOUBLE_EQ(SupportDistance(flat, {0, 0, 0}, 15, 15), 0.125);
}

}  // namespace
}  // namespace sdfloc
