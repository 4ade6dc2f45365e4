#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "sdfloc/block_grid.h"
#include "sdfloc/sdf_submap.h"

namespace sdfloc {

using ScalarField = BlockGrid<double>;
using VectorField = BlockGrid<Vec3>;

// Separable 3-D kernel: one odd-length tap vector per axis, centered.
// Convolution convention: out(k) = sum_t taps[t] * in(k - t).
struct Kernel {
  std::array<std::vector<double>, 3> taps;

  int Radius(int axis) const { return static_cast<int>(taps[axis].size() / 2); }
  int SupportRadius() const {
    return std::max({Radius(0), Radius(1), Radius(2)});
  }
};

// Taps at integer offsets in [-ceil(3 sigma), ceil(3 sigma)], unit sum.
// Throws kInvalidArgument for sigma <= 0.
std::vector<double> GaussianTaps(double sigma);
Kernel GaussianKernel(double sigma);

// Central difference (1/2)[1, 0, -1] along `axis` (unit response to a unit
// ramp), triangle smoothing (1/4)[1, 2, 1] along the other two axes.
Kernel SobelKernel(int axis);

// Per-axis full 1-D convolution of the tap vectors: (a o b) * f == a * (b * f).
std::vector<double> ConvolveTaps(const std::vector<double>& a,
                                 const std::vector<double>& b);
Kernel Compose(const Kernel& a, const Kernel& b);

// Valid-support convolution: the output holds exactly those voxels whose
// whole box support [k - r, k + r] is stored in the input. Executed as three
// 1-D passes, block-parallel; results do not depend on num_threads.
ScalarField ConvolveValid(const ScalarField& field, const Kernel& kernel,
                          int num_threads = 1);

ScalarField DistanceField(const SdfSubmap& sdf);

struct HessianFields {
  ScalarField xx, xy, xz, yy, yz, zz;
};

// Gaussian-blurred distance; shared between the gradient and Hessian paths.
ScalarField BlurDistance(const SdfSubmap& sdf, double sigma_grad, int num_threads = 1);
// Metric gradient (1/m units of distance per meter) of an already blurred field.
VectorField GradientOfBlurred(const ScalarField& blurred, double voxel_size,
                              int num_threads = 1);
// Metric Hessian (1/m) of an already blurred field; xy is computed once.
HessianFields HessianOfBlurred(const ScalarField& blurred, double voxel_size,
                               int num_threads = 1);

VectorField ComputeGradient(const SdfSubmap& sdf, double sigma_grad, int num_threads = 1);
HessianFields ComputeHessian(const SdfSubmap& sdf, double sigma_grad, int num_threads = 1);

// Debug dump in the submap archive format (weight = 1).
void WriteFieldArchive(const ScalarField& field, double voxel_size,
                       const RigidTransform& world_from_submap,
                       const std::filesystem::path& path);

}  // namespace sdfloc
