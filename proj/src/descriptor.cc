#include "sdfloc/descriptor.h"

#include <cmath>
#include <fstream>
#include <numbers>

#include "sdfloc/io.h"

namespace sdfloc {
namespace {

constexpr double kPi = std::numbers::pi;

void CheckDivisions(int n_div) {
  if (n_div < 2) throw Error(ErrorCode::kInvalidArgument, "n_div must be >= 2");
}

// Integral of cos(theta) times the rising/falling half of a tent of width
// delta centered at c.
double RightHalf(double c, double delta) {
  return -std::sin(c) + (std::cos(c) - std::cos(c + delta)) / delta;
}
double LeftHalf(double c, double delta) {
  return std::sin(c) - (std::cos(c - delta) - std::cos(c)) / delta;
}

}  // namespace

std::vector<double> HistogramDeposits(const std::vector<SupportSample>& samples,
                                      const Mat3& rotation, int n_div) {
  CheckDivisions(n_div);
  const int n_az = 2 * n_div;
  const double delta = kPi / n_div;
  std::vector<double> hist(size_t(n_az) * n_div, 0.0);
  for (const SupportSample& s : samples) {
    const Vec3 g = rotation * s.gradient;
    const double mag = g.norm();
    if (!(mag >= 1e-12)) continue;
    const double phi = std::atan2(g.y(), g.x());
    const double theta = std::asin(std::clamp(g.z() / mag, -1.0, 1.0));

    const double ua = (phi + kPi) / delta - 0.5;
    const double fa0 = std::floor(ua);
    const double fa = ua - fa0;
    const int a0 = ((static_cast<int>(fa0) % n_az) + n_az) % n_az;
    const int a1 = (a0 + 1) % n_az;

    const double up = (theta + 0.5 * kPi) / delta - 0.5;
    int p0, p1;
    double fp;
    if (up <= 0.0) {
      p0 = p1 = 0;
      fp = 0.0;
    } else if (up >= n_div - 1) {
      p0 = p1 = n_div - 1;
      fp = 0.0;
    } else {
      const double fl = std::floor(up);
      p0 = static_cast<int>(fl);
      p1 = p0 + 1;
      fp = up - fl;
    }
    hist[BinIndex(a0, p0, n_div)] += mag * (1 - fa) * (1 - fp);
    hist[BinIndex(a1, p0, n_div)] += mag * fa * (1 - fp);
    hist[BinIndex(a0, p1, n_div)] += mag * (1 - fa) * fp;
    hist[BinIndex(a1, p1, n_div)] += mag * fa * fp;
  }
  return hist;
}

std::vector<double> EffectiveBinSolidAngles(int n_div) {
  CheckDivisions(n_div);
  const double delta = kPi / n_div;
  std::vector<double> polar(n_div);
  for (int i = 0; i < n_div; ++i) {
    const double c = -0.5 * kPi + (i + 0.5) * delta;
    if (i == 0) {
      polar[i] = (1.0 + std::sin(c)) + RightHalf(c, delta);
    } else if (i == n_div - 1) {
      polar[i] = LeftHalf(c, delta) + (1.0 - std::sin(c));
    } else {
      polar[i] = 2.0 * std::cos(c) * (1.0 - std::cos(delta)) / delta;
    }
  }
  std::vector<double> out(2 * size_t(n_div) * n_div);
  for (int a = 0; a < 2 * n_div; ++a) {
    for (int p = 0; p < n_div; ++p) out[BinIndex(a, p, n_div)] = delta * polar[p];
  }
  return out;
}

std::vector<double> GeometricBinSolidAngles(int n_div) {
  CheckDivisions(n_div);
  const double delta = kPi / n_div;
  std::vector<double> out(2 * size_t(n_div) * n_div);
  for (int a = 0; a < 2 * n_div; ++a) {
    for (int p = 0; p < n_div; ++p) {
      const double lo = -0.5 * kPi + p * delta;
      out[BinIndex(a, p, n_div)] = delta * (std::sin(lo + delta) - std::sin(lo));
    }
  }
  return out;
}

double SupportDistance(const SdfSubmap& sdf, const VoxelIndex& center, double r_f,
                       double sigma_desc) {
  const double inv = 1.0 / (2.0 * sigma_desc * sigma_desc);
  double num = 0.0;
  double den = 0.0;
  ForEachInSphere(sdf.voxels(), center, r_f,
                  [&](const VoxelIndex& o, const SdfVoxel& voxel) {
                    if (!(voxel.weight > 0.f)) return;
                    const double d2 =
                        double(o.x) * o.x + double(o.y) * o.y + double(o.z) * o.z;
                    const double w = voxel.weight * std::exp(-d2 * inv);
                    num += w * voxel.distance;
                    den += w;
                  });
  return den > 0.0 ? num / den : 0.0;
}

Descriptor DescribeWithDistance(const std::vector<SupportSample>& samples,
                                const Lrf& lrf, double b_dist, int b_class,
                                const DescriptorParams& params) {
  const int n = params.n_div;
  std::vector<double> hist = HistogramDeposits(samples, lrf.rotation, n);
  const std::vector<double> omega = EffectiveBinSolidAngles(n);
  const double count = samples.empty() ? 1.0 : double(samples.size());
  bool any = false;
  for (size_t i = 0; i < hist.size(); ++i) {
    any |= hist[i] != 0.0;
    hist[i] /= count * omega[i];
  }
  Descriptor d;
  d.values = std::move(hist);
  d.values.push_back(params.alpha_dist * b_dist);
  d.values.push_back(params.alpha_class * b_class);
  d.zero_gradient = !any;
  return d;
}

double DescriptorDistance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "descriptor length mismatch");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double DescriptorDistance(const Descriptor& a, const Descriptor& b) {
  return DescriptorDistance(a.values, b.values);
}

void WriteDescriptorDump(const std::vector<Descriptor>& descriptors, int n_div,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const size_t len = DescriptorLength(n_div);
  binary::WriteU32(out, static_cast<uint32_t>(n_div));
  binary::WriteU64(out, descriptors.size());
  for (const Descriptor& d : descriptors) {
    if (d.values.size() != len) {
      throw Error(ErrorCode::kInvalidArgument, "descriptor length mismatch");
    }
    binary::WriteI32(out, d.keypoint.x);
    binary::WriteI32(out, d.keypoint.y);
    binary::WriteI32(out, d.keypoint.z);
    binary::WriteU8(out, d.lrf_ordinal);
    for (double v : d.values) binary::WriteF32(out, static_cast<float>(v));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<Descriptor> ReadDescriptorDump(const std::filesystem::path& path,
                                           int* n_div) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const uint32_t n = binary::ReadU32(in);
  if (n < 2 || n > 1000) throw Error(ErrorCode::kFormat, "bad n_div in dump");
  const uint64_t count = binary::ReadU64(in);
  const size_t len = DescriptorLength(static_cast<int>(n));
  std::vector<Descriptor> out;
  for (uint64_t i = 0; i < count; ++i) {
    Descriptor d;
    d.keypoint.x = binary::ReadI32(in);
    d.keypoint.y = binary::ReadI32(in);
    d.keypoint.z = binary::ReadI32(in);
    d.lrf_ordinal = binary::ReadU8(in);
    d.values.resize(len);
    for (double& v : d.values) v = binary::ReadF32(in);
    out.push_back(std::move(d));
  }
  if (n_div != nullptr) *n_div = static_cast<int>(n);
  return out;
}

}  // namespace sdfloc
