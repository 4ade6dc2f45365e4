#include "sdfloc/filtering.h"

#include <cmath>

#include "sdfloc/io.h"
#include "sdfloc/parallel.h"

namespace sdfloc {
namespace {

using Block = ScalarField::Block;
constexpr int kShift = ScalarField::kBlockShift;
constexpr int kMask = ScalarField::kBlockMask;

bool IsIdentity(const std::vector<double>& taps) {
  return taps.size() == 1 && taps[0] == 1.0;
}

ScalarField ConvolveAxis(const ScalarField& in, const std::vector<double>& taps,
                         int axis, int num_threads) {
  const int r = static_cast<int>(taps.size() / 2);
  const int reach = (r + kMask) >> kShift;
  const int stride = 1 << (kShift * axis);
  const std::vector<VoxelIndex> blocks = in.SortedBlockIndices();

  ScalarField out;
  std::vector<Block*> out_blocks(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) {
    out_blocks[i] = &out.GetOrCreateBlock(blocks[i]);
  }

  ParallelFor(blocks.size(), num_threads, [&](size_t bi) {
    std::vector<const Block*> line(2 * reach + 1);
    for (int o = -reach; o <= reach; ++o) {
      VoxelIndex nb = blocks[bi];
      nb[axis] += o;
      line[o + reach] = in.FindBlock(nb);
    }
    const Block& src = *line[reach];
    Block& dst = *out_blocks[bi];
    for (int l = 0; l < ScalarField::kVoxelsPerBlock; ++l) {
      if (!src.Has(l)) continue;
      const int coord = (l >> (kShift * axis)) & kMask;
      double sum = 0.0;
      bool valid = true;
      for (int t = -r; t <= r; ++t) {
        const int c = coord - t;
        const Block* nb = line[(c >> kShift) + reach];
        const int nl = l + ((c & kMask) - coord) * stride;
        if (nb == nullptr || !nb->Has(nl)) {
          valid = false;
          break;
        }
        sum += taps[t + r] * nb->values[nl];
      }
      if (valid) {
        dst.values[l] = sum;
        dst.Mark(l);
      }
    }
  });
  out.Compact();
  return out;
}

template <typename Fn>
ScalarField Transform(const ScalarField& in, Fn&& fn) {
  ScalarField out = in;
  for (const VoxelIndex& b : out.SortedBlockIndices()) {
    Block& block = *out.FindBlock(b);
    for (int l = 0; l < ScalarField::kVoxelsPerBlock; ++l) {
      if (block.Has(l)) block.values[l] = fn(block.values[l]);
    }
  }
  return out;
}

}  // namespace

std::vector<double> GaussianTaps(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "Gaussian sigma must be positive");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;
  // Enforce exact mirror symmetry.
  for (int i = 1; i <= radius; ++i) taps[radius - i] = taps[radius + i];
  return taps;
}

Kernel GaussianKernel(double sigma) {
  const std::vector<double> taps = GaussianTaps(sigma);
  return {{taps, taps, taps}};
}

Kernel SobelKernel(int axis) {
  if (axis < 0 || axis > 2) {
    throw Error(ErrorCode::kInvalidArgument, "Sobel axis out of range");
  }
  Kernel k;
  for (int a = 0; a < 3; ++a) {
    k.taps[a] = a == axis ? std::vector<double>{0.5, 0.0, -0.5}
                          : std::vector<double>{0.25, 0.5, 0.25};
  }
  return k;
}

std::vector<double> ConvolveTaps(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Kernel Compose(const Kernel& a, const Kernel& b) {
  Kernel k;
  for (int axis = 0; axis < 3; ++axis) {
    k.taps[axis] = ConvolveTaps(a.taps[axis], b.taps[axis]);
  }
  return k;
}

ScalarField ConvolveValid(const ScalarField& field, const Kernel& kernel,
                          int num_threads) {
  ScalarField current;
  bool copied = false;
  for (int axis = 0; axis < 3; ++axis) {
    const std::vector<double>& taps = kernel.taps[axis];
    if (taps.empty() || taps.size() % 2 == 0) {
      throw Error(ErrorCode::kInvalidArgument, "kernel taps must have odd length");
    }
    if (IsIdentity(taps)) continue;
    current = ConvolveAxis(copied ? current : field, taps, axis, num_threads);
    copied = true;
  }
  return copied ? current : field;
}

ScalarField DistanceField(const SdfSubmap& sdf) {
  ScalarField field;
  sdf.voxels().ForEach([&](const VoxelIndex& v, const SdfVoxel& voxel) {
    field.Set(v, voxel.distance);
  });
  return field;
}

ScalarField BlurDistance(const SdfSubmap& sdf, double sigma_grad, int num_threads) {
  return ConvolveValid(DistanceField(sdf), GaussianKernel(sigma_grad), num_threads);
}

VectorField GradientOfBlurred(const ScalarField& blurred, double voxel_size,
                              int num_threads) {
  std::array<ScalarField, 3> parts;
  for (int a = 0; a < 3; ++a) {
    parts[a] = ConvolveValid(blurred, SobelKernel(a), num_threads);
  }
  VectorField gradient;
  const double inv = 1.0 / voxel_size;
  parts[0].ForEach([&](const VoxelIndex& v, const double& gx) {
    const double* gy = parts[1].Find(v);
    const double* gz = parts[2].Find(v);
    if (gy && gz) gradient.Set(v, Vec3(gx, *gy, *gz) * inv);
  });
  return gradient;
}

HessianFields HessianOfBlurred(const ScalarField& blurred, double voxel_size,
                               int num_threads) {
  const double inv2 = 1.0 / (voxel_size * voxel_size);
  const auto component = [&](int a, int b) {
    const ScalarField raw =
        ConvolveValid(blurred, Compose(SobelKernel(a), SobelKernel(b)), num_threads);
    return Transform(raw, [inv2](double x) { return x * inv2; });
  };
  HessianFields h;
  h.xx = component(0, 0);
  h.xy = component(0, 1);
  h.xz = component(0, 2);
  h.yy = component(1, 1);
  h.yz = component(1, 2);
  h.zz = component(2, 2);
  return h;
}

VectorField ComputeGradient(const SdfSubmap& sdf, double sigma_grad, int num_threads) {
  return GradientOfBlurred(BlurDistance(sdf, sigma_grad, num_threads),
                           sdf.voxel_size(), num_threads);
}

HessianFields ComputeHessian(const SdfSubmap& sdf, double sigma_grad, int num_threads) {
  return HessianOfBlurred(BlurDistance(sdf, sigma_grad, num_threads),
                          sdf.voxel_size(), num_threads);
}

void WriteFieldArchive(const ScalarField& field, double voxel_size,
                       const RigidTransform& world_from_submap,
                       const std::filesystem::path& path) {
  SdfSubmap dump(0, voxel_size, 0.0, world_from_submap);
  field.ForEach([&](const VoxelIndex& v, const double& value) {
    dump.voxels().Set(v, {static_cast<float>(value), 1.f});
  });
  WriteSubmapArchive(dump, path);
}

}  // namespace sdfloc
