#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sdfloc/sdf_submap.h"

namespace sdfloc {

// Submap archive, little-endian:
//   "FSDF" | version u32 | voxel_size f64 | truncation f64 |
//   rotation f64[9] (row-major) | translation f64[3] | voxel count u64 |
//   count x { i32 x, i32 y, i32 z, f32 distance, f32 weight }
// The pose is world_from_submap. Records are written in lexicographic
// voxel order. Readers reject any version other than kArchiveVersion.
constexpr uint32_t kArchiveVersion = 1;

void WriteSubmapArchive(const SdfSubmap& submap, std::ostream& out);
void WriteSubmapArchive(const SdfSubmap& submap, const std::filesystem::path& path);
SdfSubmap ReadSubmapArchive(std::istream& in, int id = 0);
SdfSubmap ReadSubmapArchive(const std::filesystem::path& path, int id = 0);

// ASCII PLY (vertex element with x/y/z properties) or whitespace-separated
// "x y z" lines, chosen by extension (.ply vs anything else). Lines starting
// with '#' are skipped in the XYZ format.
std::vector<Vec3> ReadPointcloud(const std::filesystem::path& path);
std::vector<Vec3> ReadAsciiPly(std::istream& in);
std::vector<Vec3> ReadXyz(std::istream& in);

namespace binary {

void WriteU8(std::ostream& out, uint8_t v);
void WriteU32(std::ostream& out, uint32_t v);
void WriteU64(std::ostream& out, uint64_t v);
void WriteI32(std::ostream& out, int32_t v);
void WriteF32(std::ostream& out, float v);
void WriteF64(std::ostream& out, double v);
uint8_t ReadU8(std::istream& in);
uint32_t ReadU32(std::istream& in);
uint64_t ReadU64(std::istream& in);
int32_t ReadI32(std::istream& in);
float ReadF32(std::istream& in);
double ReadF64(std::istream& in);

}  // namespace binary
}  // namespace sdfloc
