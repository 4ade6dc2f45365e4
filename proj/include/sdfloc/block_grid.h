#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sdfloc/common.h"

namespace sdfloc {

// Spatially hashed sparse grid: 8^3 dense blocks keyed by block index, with a
// per-voxel occupancy mask. Only occupied voxels are "stored".
template <typename T>
class BlockGrid {
 public:
  static constexpr int kBlockShift = 3;
  static constexpr int kBlockWidth = 1 << kBlockShift;
  static constexpr int kBlockMask = kBlockWidth - 1;
  static constexpr int kVoxelsPerBlock = kBlockWidth * kBlockWidth * kBlockWidth;

  struct Block {
    std::array<T, kVoxelsPerBlock> values{};
    std::array<uint64_t, kVoxelsPerBlock / 64> occupied{};

    bool Has(int linear) const {
      return (occupied[linear >> 6] >> (linear & 63)) & 1u;
    }
    void Mark(int linear) { occupied[linear >> 6] |= uint64_t{1} << (linear & 63); }
    int Count() const {
      int n = 0;
      for (uint64_t w : occupied) n += std::popcount(w);
      return n;
    }
  };

  static VoxelIndex BlockOf(const VoxelIndex& v) {
    return {v.x >> kBlockShift, v.y >> kBlockShift, v.z >> kBlockShift};
  }
  static int LinearOf(const VoxelIndex& v) {
    return (v.x & kBlockMask) | ((v.y & kBlockMask) << kBlockShift) |
           ((v.z & kBlockMask) << (2 * kBlockShift));
  }
  static VoxelIndex VoxelOf(const VoxelIndex& block, int linear) {
    return {(block.x << kBlockShift) | (linear & kBlockMask),
            (block.y << kBlockShift) | ((linear >> kBlockShift) & kBlockMask),
            (block.z << kBlockShift) | (linear >> (2 * kBlockShift))};
  }

  size_t size() const { return num_voxels_; }
  bool empty() const { return num_voxels_ == 0; }
  size_t num_blocks() const { return blocks_.size(); }

  const Block* FindBlock(const VoxelIndex& block_index) const {
    const auto it = blocks_.find(VoxelKey(block_index));
    return it == blocks_.end() ? nullptr : &it->second;
  }
  Block* FindBlock(const VoxelIndex& block_index) {
    const auto it = blocks_.find(VoxelKey(block_index));
    return it == blocks_.end() ? nullptr : &it->second;
  }
  Block& GetOrCreateBlock(const VoxelIndex& block_index) {
    return blocks_[VoxelKey(block_index)];
  }

  const T* Find(const VoxelIndex& v) const {
    const Block* b = FindBlock(BlockOf(v));
    if (b == nullptr) return nullptr;
    const int l = LinearOf(v);
    return b->Has(l) ? &b->values[l] : nullptr;
  }
  T* Find(const VoxelIndex& v) {
    Block* b = FindBlock(BlockOf(v));
    if (b == nullptr) return nullptr;
    const int l = LinearOf(v);
    return b->Has(l) ? &b->values[l] : nullptr;
  }
  bool Contains(const VoxelIndex& v) const { return Find(v) != nullptr; }

  // Inserts a default value if absent; returns a reference to the slot.
  T& At(const VoxelIndex& v) {
    Block& b = GetOrCreateBlock(BlockOf(v));
    const int l = LinearOf(v);
    if (!b.Has(l)) {
      b.Mark(l);
      b.values[l] = T{};
      ++num_voxels_;
    }
    return b.values[l];
  }
  void Set(const VoxelIndex& v, const T& value) { At(v) = value; }

  // Block indices in lexicographic order; the canonical iteration order.
  std::vector<VoxelIndex> SortedBlockIndices() const {
    std::vector<VoxelIndex> out;
    out.reserve(blocks_.size());
    for (const auto& [key, block] : blocks_) out.push_back(VoxelFromKey(key));
    std::sort(out.begin(), out.end());
    return out;
  }

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (const VoxelIndex& bi : SortedBlockIndices()) {
      const Block& b = *FindBlock(bi);
      for (int l = 0; l < kVoxelsPerBlock; ++l) {
        if (b.Has(l)) fn(VoxelOf(bi, l), b.values[l]);
      }
    }
  }

  std::vector<VoxelIndex> SortedVoxels() const {
    std::vector<VoxelIndex> out;
    out.reserve(num_voxels_);
    ForEach([&](const VoxelIndex& v, const T&) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
  }

  // Drops empty blocks and recounts; used after bulk writes into blocks.
  void Compact() {
    num_voxels_ = 0;
    for (auto it = blocks_.begin(); it != blocks_.end();) {
      const int n = it->second.Count();
      if (n == 0) {
        it = blocks_.erase(it);
      } else {
        num_voxels_ += n;
        ++it;
      }
    }
  }

  bool SameDomain(const BlockGrid& other) const {
    if (num_voxels_ != other.num_voxels_ || blocks_.size() != other.blocks_.size())
      return false;
    for (const auto& [key, block] : blocks_) {
      const auto it = other.blocks_.find(key);
      if (it == other.blocks_.end() || it->second.occupied != block.occupied)
        return false;
    }
    return true;
  }

 private:
  std::unordered_map<uint64_t, Block> blocks_;
  size_t num_voxels_ = 0;
};

// Visits every stored voxel v with |v - center|^2 <= radius^2 (in voxel
// units) as fn(offset, value), in canonical block/linear order.
template <typename T, typename Fn>
void ForEachInSphere(const BlockGrid<T>& grid, const VoxelIndex& center,
                     double radius, Fn&& fn) {
  using Grid = BlockGrid<T>;
  const int r = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  const VoxelIndex lo = Grid::BlockOf(center - VoxelIndex{r, r, r});
  const VoxelIndex hi = Grid::BlockOf(center + VoxelIndex{r, r, r});
  for (int32_t bx = lo.x; bx <= hi.x; ++bx) {
    for (int32_t by = lo.y; by <= hi.y; ++by) {
      for (int32_t bz = lo.z; bz <= hi.z; ++bz) {
        const VoxelIndex bi{bx, by, bz};
        const auto* block = grid.FindBlock(bi);
        if (block == nullptr) continue;
        for (int l = 0; l < Grid::kVoxelsPerBlock; ++l) {
          if (!block->Has(l)) continue;
          const VoxelIndex offset = Grid::VoxelOf(bi, l) - center;
          const double d2 = double(offset.x) * offset.x +
                            double(offset.y) * offset.y +
                            double(offset.z) * offset.z;
          if (d2 <= r2) fn(offset, block->values[l]);
        }
      }
    }
  }
}

}  // namespace sdfloc
