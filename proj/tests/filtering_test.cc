#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "sdfloc/filtering.h"
#include "test_util.h"

namespace sdfloc {
namespace {

// Dense triple-loop convolution with the outer product of the kernel taps.
ScalarField DenseConvolve(const ScalarField& in, const Kernel& k) {
  const int rx = k.Radius(0), ry = k.Radius(1), rz = k.Radius(2);
  ScalarField out;
  in.ForEach([&](const VoxelIndex& v, const double&) {
    double acc = 0.0;
    for (int tz = -rz; tz <= rz; ++tz) {
      for (int ty = -ry; ty <= ry; ++ty) {
        for (int tx = -rx; tx <= rx; ++tx) {
          const double* f = in.Find(v - VoxelIndex{tx, ty, tz});
          if (f == nullptr) return;
          acc += k.taps[0][tx + rx] * k.taps[1][ty + ry] * k.taps[2][tz + rz] * *f;
        }
      }
    }
    out.Set(v, acc);
  });
  return out;
}

void ExpectFieldsNear(const ScalarField& a, const ScalarField& b, double tol) {
  ASSERT_TRUE(a.SameDomain(b));
  a.ForEach([&](const VoxelIndex& v, const double& x) {
    ASSERT_NEAR(x, *b.Find(v), tol) << v.x << " " << v.y << " " << v.z;
  });
}

template <typename Fn>
ScalarField DenseCube(int lo, int hi, Fn fn) {
  ScalarField f;
  for (int z = lo; z < hi; ++z) {
    for (int y = lo; y < hi; ++y) {
      for (int x = lo; x < hi; ++x) f.Set({x, y, z}, fn(x, y, z));
    }
  }
  return f;
}

TEST(KernelTest, GaussianTapsSymmetricAndNormalized) {
  for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
    const std::vector<double> t = GaussianTaps(sigma);
    const int r = static_cast<int>(t.size() / 2);
    EXPECT_EQ(r, static_cast<int>(std::ceil(3 * sigma)));
    double sum = 0.0;
    for (int i = 0; i <= r; ++i) EXPECT_EQ(t[r - i], t[r + i]);
    for (double x : t) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
  EXPECT_EQ(GaussianKernel(2.0).SupportRadius(), 6);
  EXPECT_THROW(GaussianTaps(0.0), Error);
  EXPECT_THROW(GaussianTaps(-1.0), Error);
}

TEST(KernelTest, SobelDerivativeTapsSumToZero) {
  for (int axis = 0; axis < 3; ++axis) {
    const Kernel k = SobelKernel(axis);
    double sum = 0.0;
    for (double x : k.taps[axis]) sum += x;
    EXPECT_EQ(sum, 0.0);
    for (int other = 0; other < 3; ++other) {
      if (other == axis) continue;
      double s = 0.0;
      for (double x : k.taps[other]) s += x;
      EXPECT_EQ(s, 1.0);
    }
  }
}

TEST(KernelTest, ComposedTapsActLikeSequentialConvolution) {
  std::mt19937_64 rng(10);
  const ScalarField f = testing::RandomField(14, 1.0, rng);
  const Kernel a = SobelKernel(0);
  const Kernel b = GaussianKernel(1.0);
  ExpectFieldsNear(ConvolveValid(f, Compose(a, b)), ConvolveValid(ConvolveValid(f, b), a),
                   1e-12);
}

TEST(ConvolveTest, MatchesDenseOracleOnRandomCube) {
  std::mt19937_64 rng(11);
  const ScalarField f = testing::RandomField(16, 1.0, rng, {-3, 5, 0});
  for (const Kernel& k : {GaussianKernel(1.0), GaussianKernel(2.0), SobelKernel(0),
                          SobelKernel(2), Compose(SobelKernel(1), GaussianKernel(1.5))}) {
    ExpectFieldsNear(ConvolveValid(f, k), DenseConvolve(f, k), 1e-10);
  }
}

TEST(ConvolveTest, ComposedHessianKernelMatchesSequentialDenseOracle) {
  std::mt19937_64 rng(12);
  const ScalarField f = testing::RandomField(16, 1.0, rng);
  const Kernel g = GaussianKernel(1.0);
  const Kernel composed = Compose(Compose(SobelKernel(0), SobelKernel(1)), g);
  const ScalarField oracle =
      DenseConvolve(DenseConvolve(DenseConvolve(f, g), SobelKernel(1)), SobelKernel(0));
  ExpectFieldsNear(ConvolveValid(f, composed), oracle, 1e-10);
}

TEST(ConvolveTest, OutputDomainIsErosionOfInput) {
  std::mt19937_64 rng(13);
  const ScalarField f = testing::RandomField(18, 0.995, rng);
  const Kernel k = GaussianKernel(0.5);
  const int r = k.SupportRadius();
  const ScalarField out = ConvolveValid(f, k);
  size_t expected = 0;
  f.ForEach([&](const VoxelIndex& v, const double&) {
    bool full = true;
    for (int z = -r; z <= r && full; ++z) {
      for (int y = -r; y <= r && full; ++y) {
        for (int x = -r; x <= r && full; ++x) full = f.Contains(v + VoxelIndex{x, y, z});
      }
    }
    EXPECT_EQ(out.Contains(v), full);
    if (full) ++expected;
  });
  EXPECT_EQ(out.size(), expected);
  ExpectFieldsNear(out, DenseConvolve(f, k), 1e-10);
}

TEST(ConvolveTest, ConstantAndRampExamples) {
  const ScalarField c = DenseCube(0, 16, [](int, int, int) { return 3.25; });
  const ScalarField blurred = ConvolveValid(c, GaussianKernel(2.0));
  EXPECT_EQ(blurred.size(), 4u * 4u * 4u);
  blurred.ForEach([](const VoxelIndex&, const double& x) { EXPECT_NEAR(x, 3.25, 1e-12); });

  const ScalarField ramp = DenseCube(0, 8, [](int x, int, int) { return double(x); });
  const ScalarField d = ConvolveValid(ramp, SobelKernel(0));
  EXPECT_EQ(d.size(), 6u * 6u * 6u);
  d.ForEach([](const VoxelIndex&, const double& x) { EXPECT_NEAR(x, 1.0, 1e-12); });
  EXPECT_TRUE(ConvolveValid(ScalarField{}, SobelKernel(0)).empty());
}

TEST(ConvolveTest, IndependentOfThreadCount) {
  std::mt19937_64 rng(14);
  const ScalarField f = testing::RandomField(40, 0.995, rng);
  const Kernel k = Compose(SobelKernel(2), GaussianKernel(2.0));
  const ScalarField a = ConvolveValid(f, k, 1);
  const ScalarField b = ConvolveValid(f, k, 4);
  ASSERT_TRUE(a.SameDomain(b));
  a.ForEach([&](const VoxelIndex& v, const double& x) { ASSERT_EQ(x, *b.Find(v)); });
}

SdfSubmap SubmapFrom(double vs, int lo, int hi, const std::function<double(const Vec3&)>& phi) {
  SdfSubmap s(0, vs, 3 * vs);
  for (int z = lo; z < hi; ++z) {
    for (int y = lo; y < hi; ++y) {
      for (int x = lo; x < hi; ++x) {
        const VoxelIndex v{x, y, z};
        s.voxels().Set(v, {static_cast<float>(phi(s.Center(v))), 1.f});
      }
    }
  }
  return s;
}

TEST(GradientTest, PlaneHasUnitNormal) {
  const SdfSubmap s = SubmapFrom(0.05, -10, 10, [](const Vec3& p) { return p.z(); });
  const VectorField g = ComputeGradient(s, 2.0);
  ASSERT_EQ(g.size(), 6u * 6u * 6u);
  g.ForEach([](const VoxelIndex&, const Vec3& v) {
    EXPECT_LT((v - Vec3(0, 0, 1)).norm(), 1e-3);
  });
  const SdfSubmap flat = SubmapFrom(0.05, 0, 18, [](const Vec3&) { return 0.4; });
  ComputeGradient(flat, 2.0).ForEach([](const VoxelIndex&, const Vec3& v) {
    EXPECT_LT(v.norm(), 1e-9);
  });
}

TEST(GradientTest, SphereGradientIsRadial) {
  const double vs = 0.05;
  const Vec3 c(0.013, -0.02, 0.031);
  const SdfSubmap s =
      SubmapFrom(vs, -16, 16, [&](const Vec3& p) { return (p - c).norm() - 0.4; });
  const VectorField g = ComputeGradient(s, 2.0);
  size_t checked = 0;
  g.ForEach([&](const VoxelIndex& v, const Vec3& grad) {
    const Vec3 radial = s.Center(v) - c;
    if (radial.norm() <= 6 * vs) return;
    EXPECT_GE(grad.normalized().dot(radial.normalized()), 0.999);
    ++checked;
  });
  EXPECT_GT(checked, 1000u);
}

TEST(GradientTest, AgreesWithCentralDifferencesOfBlurredField) {
  const double vs = 0.05;
  const Vec3 c(-0.9, 0.2, -0.7);
  const SdfSubmap s =
      SubmapFrom(vs, -12, 12, [&](const Vec3& p) { return (p - c).norm() - 0.3; });
  const ScalarField blurred = BlurDistance(s, 2.0);
  const VectorField g = GradientOfBlurred(blurred, vs);
  size_t checked = 0;
  g.ForEach([&](const VoxelIndex& v, const Vec3& grad) {
    Vec3 fd;
    for (int a = 0; a < 3; ++a) {
      VoxelIndex p = v, m = v;
      p[a] += 1;
      m[a] -= 1;
      fd[a] = (*blurred.Find(p) - *blurred.Find(m)) / (2 * vs);
    }
    EXPECT_LE((grad - fd).norm(), 0.01 * fd.norm());
    ++checked;
  });
  EXPECT_GT(checked, 500u);
}

TEST(HessianTest, LinearFieldHasZeroHessian) {
  const SdfSubmap s = SubmapFrom(
      0.05, 0, 20, [](const Vec3& p) { return 0.3 * p.x() - 0.7 * p.y() + 0.2 * p.z() + 0.1; });
  const HessianFields h = ComputeHessian(s, 2.0);
  ASSERT_FALSE(h.xx.empty());
  for (const ScalarField* f : {&h.xx, &h.xy, &h.xz, &h.yy, &h.yz, &h.zz}) {
    f->ForEach([](const VoxelIndex&, const double& x) { EXPECT_NEAR(x, 0.0, 1e-6); });
  }
}

TEST(HessianTest, QuadraticFieldHasCurvatureTwo) {
  // Exact double values: the float archive would perturb the second differences.
  const double vs = 0.05;
  ScalarField f = DenseCube(-10, 10, [&](int x, int, int) {
    const double px = vs * (x + 0.5);
    return px * px;
  });
  const HessianFields h = HessianOfBlurred(ConvolveValid(f, GaussianKernel(2.0)), vs);
  ASSERT_FALSE(h.xx.empty());
  h.xx.ForEach([](const VoxelIndex&, const double& x) { EXPECT_NEAR(x, 2.0, 0.04); });
  for (const ScalarField* o : {&h.xy, &h.xz, &h.yy, &h.yz, &h.zz}) {
    o->ForEach([](const VoxelIndex&, const double& x) { EXPECT_NEAR(x, 0.0, 0.04); });
  }
}

TEST(HessianTest, CrossTermIndependentOfOrderingAndSharedDomain) {
  std::mt19937_64 rng(15);
  const double vs = 0.1;
  const ScalarField f = testing::RandomField(16, 1.0, rng);
  const ScalarField blurred = ConvolveValid(f, GaussianKernel(1.0));
  const HessianFields h = HessianOfBlurred(blurred, vs);
  const ScalarField yx = ConvolveValid(blurred, Compose(SobelKernel(1), SobelKernel(0)));
  ASSERT_TRUE(h.xy.SameDomain(yx));
  h.xy.ForEach([&](const VoxelIndex& v, const double& x) {
    EXPECT_NEAR(x, *yx.Find(v) / (vs * vs), 1e-12);
  });
  for (const ScalarField* o : {&h.xx, &h.xz, &h.yy, &h.yz, &h.zz}) {
    EXPECT_TRUE(h.xy.SameDomain(*o));
  }
  const ScalarField oracle =
      DenseConvolve(DenseConvolve(f, GaussianKernel(1.0)),
                    Compose(SobelKernel(2), SobelKernel(2)));
  h.zz.ForEach([&](const VoxelIndex& v, const double& x) {
    EXPECT_NEAR(x, *oracle.Find(v) / (vs * vs), 1e-10 / (vs * vs));
  });
}

TEST(FilteringTest, SubmapFieldsAreDeterministicAcrossThreads) {
  const SdfSubmap s = BuildSyntheticScene(testing::SphereScene(Vec3::Zero(), 0.35),
                                          testing::Raster(0.05, 0.75, 0.01, 3));
  const VectorField a = ComputeGradient(s, 2.0, 1);
  const VectorField b = ComputeGradient(s, 2.0, 3);
  ASSERT_TRUE(a.SameDomain(b));
  a.ForEach([&](const VoxelIndex& v, const Vec3& x) { ASSERT_EQ(x, *b.Find(v)); });
  const HessianFields ha = ComputeHessian(s, 2.0, 1);
  const HessianFields hb = ComputeHessian(s, 2.0, 4);
  ha.yz.ForEach([&](const VoxelIndex& v, const double& x) { ASSERT_EQ(x, *hb.yz.Find(v)); });
  // Every output voxel is inside the source domain.
  a.ForEach([&](const VoxelIndex& v, const Vec3&) { ASSERT_TRUE(s.voxels().Contains(v)); });
}

}  // namespace
}  // namespace sdfloc
