#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sdfloc/lrf.h"
#include "sdfloc/sdf_submap.h"

namespace sdfloc {

struct DescriptorParams {
  int n_div = 10;
  double alpha_dist = 1e-7;
  double alpha_class = 1e-5;
};

struct Descriptor {
  // [histogram (2n azimuth x n polar, azimuth-major), a_dist*b_dist, a_class*b_class]
  std::vector<double> values;
  VoxelIndex keypoint;
  Vec3 position = Vec3::Zero();
  uint8_t lrf_ordinal = 0;
  bool zero_gradient = false;  // histogram is all zero
};

inline size_t DescriptorLength(int n_div) { return 2 * size_t(n_div) * n_div + 2; }

// Raw bilinear deposits of |g_F| (g_F = R g) into the 2n x n grid, before any
// normalization. Zero-magnitude gradients are skipped.
std::vector<double> HistogramDeposits(const std::vector<SupportSample>& samples,
                                      const Mat3& rotation, int n_div);

// Flat index of azimuth bin `az` and polar bin `pol`.
inline size_t BinIndex(int az, int pol, int n_div) { return size_t(az) * n_div + pol; }

// Solid angle seen by each bin under bilinear soft binning: the bin's tent
// weight integrated over the sphere, with the clamped pole caps folded into
// the boundary polar bins. Uniform directions then give equal bin values.
std::vector<double> EffectiveBinSolidAngles(int n_div);

// Geometric solid angle dphi * (sin theta_hi - sin theta_lo) of each bin.
std::vector<double> GeometricBinSolidAngles(int n_div);

// Weighted mean distance over the stored voxels within r_f (voxels) of
// `center`, weighted by observation weight times the Gaussian support weight.
double SupportDistance(const SdfSubmap& sdf, const VoxelIndex& center, double r_f,
                       double sigma_desc);

Descriptor DescribeWithDistance(const std::vector<SupportSample>& samples,
                                const Lrf& lrf, double b_dist, int b_class,
                                const DescriptorParams& params);

double DescriptorDistance(const Descriptor& a, const Descriptor& b);
double DescriptorDistance(const std::vector<double>& a, const std::vector<double>& b);

void WriteDescriptorDump(const std::vector<Descriptor>& descriptors, int n_div,
                         const std::filesystem::path& path);
std::vector<Descriptor> ReadDescriptorDump(const std::filesystem::path& path,
                                           int* n_div = nullptr);

}  // namespace sdfloc
