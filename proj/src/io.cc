#include "sdfloc/io.h"

#include <Eigen/SVD>

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace sdfloc {
namespace binary {
namespace {

template <typename U>
void WriteLittle(std::ostream& out, U v) {
  std::array<char, sizeof(U)> bytes;
  for (size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U ReadLittle(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error(ErrorCode::kFormat, "unexpected end of binary stream");
  U v = 0;
  for (size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void WriteU8(std::ostream& out, uint8_t v) { WriteLittle<uint8_t>(out, v); }
void WriteU32(std::ostream& out, uint32_t v) { WriteLittle(out, v); }
void WriteU64(std::ostream& out, uint64_t v) { WriteLittle(out, v); }
void WriteI32(std::ostream& out, int32_t v) {
  WriteLittle(out, std::bit_cast<uint32_t>(v));
}
void WriteF32(std::ostream& out, float v) {
  WriteLittle(out, std::bit_cast<uint32_t>(v));
}
void WriteF64(std::ostream& out, double v) {
  WriteLittle(out, std::bit_cast<uint64_t>(v));
}
uint8_t ReadU8(std::istream& in) { return ReadLittle<uint8_t>(in); }
uint32_t ReadU32(std::istream& in) { return ReadLittle<uint32_t>(in); }
uint64_t ReadU64(std::istream& in) { return ReadLittle<uint64_t>(in); }
int32_t ReadI32(std::istream& in) {
  return std::bit_cast<int32_t>(ReadLittle<uint32_t>(in));
}
float ReadF32(std::istream& in) {
  return std::bit_cast<float>(ReadLittle<uint32_t>(in));
}
double ReadF64(std::istream& in) {
  return std::bit_cast<double>(ReadLittle<uint64_t>(in));
}

}  // namespace binary

namespace {

constexpr char kMagic[4] = {'F', 'S', 'D', 'F'};

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

void WriteSubmapArchive(const SdfSubmap& submap, std::ostream& out) {
  using namespace binary;
  out.write(kMagic, 4);
  WriteU32(out, kArchiveVersion);
  WriteF64(out, submap.voxel_size());
  WriteF64(out, submap.truncation());
  const RigidTransform& pose = submap.world_from_submap();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) WriteF64(out, pose.rotation()(r, c));
  }
  for (int r = 0; r < 3; ++r) WriteF64(out, pose.translation()[r]);
  WriteU64(out, submap.size());
  for (const VoxelIndex& v : submap.voxels().SortedVoxels()) {
    const SdfVoxel& voxel = *submap.voxels().Find(v);
    WriteI32(out, v.x);
    WriteI32(out, v.y);
    WriteI32(out, v.z);
    WriteF32(out, voxel.distance);
    WriteF32(out, voxel.weight);
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing submap archive");
}

void WriteSubmapArchive(const SdfSubmap& submap, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  WriteSubmapArchive(submap, out);
}

SdfSubmap ReadSubmapArchive(std::istream& in, int id) {
  using namespace binary;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, "not a submap archive (bad magic)");
  }
  const uint32_t version = ReadU32(in);
  if (version != kArchiveVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported submap archive version " + std::to_string(version));
  }
  const double voxel_size = ReadF64(in);
  const double truncation = ReadF64(in);
  Mat3 rotation;
  Vec3 translation;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rotation(r, c) = ReadF64(in);
  }
  for (int r = 0; r < 3; ++r) translation[r] = ReadF64(in);
  if (!IsRotation(rotation, 1e-6) || !translation.allFinite()) {
    throw Error(ErrorCode::kFormat, "archive pose is not a rigid transform");
  }
  // Re-orthonormalize to absorb serialization round-off.
  Eigen::JacobiSVD<Mat3> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  rotation = svd.matrixU() * svd.matrixV().transpose();
  if (!(voxel_size > 0.0)) {
    throw Error(ErrorCode::kFormat, "archive voxel size is not positive");
  }
  SdfSubmap submap(id, voxel_size, truncation, RigidTransform(rotation, translation));
  const uint64_t count = ReadU64(in);
  for (uint64_t i = 0; i < count; ++i) {
    VoxelIndex v;
    v.x = ReadI32(in);
    v.y = ReadI32(in);
    v.z = ReadI32(in);
    SdfVoxel voxel;
    voxel.distance = ReadF32(in);
    voxel.weight = ReadF32(in);
    if (!(voxel.weight >= 0.f) || !std::isfinite(voxel.distance)) {
      throw Error(ErrorCode::kFormat, "archive voxel has invalid distance/weight");
    }
    submap.voxels().Set(v, voxel);
  }
  return submap;
}

SdfSubmap ReadSubmapArchive(const std::filesystem::path& path, int id) {
  std::ifstream in = OpenIn(path);
  return ReadSubmapArchive(in, id);
}

std::vector<Vec3> ReadAsciiPly(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw Error(ErrorCode::kFormat, "missing ply magic");
  }
  size_t vertex_count = 0;
  int num_properties = 0;
  int axis_column[3] = {-1, -1, -1};
  bool in_vertex = false;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "format") {
      std::string fmt;
      ss >> fmt;
      ascii = fmt == "ascii";
    } else if (word == "element") {
      std::string name;
      size_t n = 0;
      ss >> name >> n;
      in_vertex = name == "vertex";
      if (in_vertex) vertex_count = n;
    } else if (word == "property" && in_vertex) {
      std::string type, name;
      ss >> type >> name;
      if (name == "x") axis_column[0] = num_properties;
      if (name == "y") axis_column[1] = num_properties;
      if (name == "z") axis_column[2] = num_properties;
      ++num_properties;
    } else if (word == "end_header") {
      break;
    }
  }
  if (!ascii) throw Error(ErrorCode::kFormat, "only ASCII PLY is supported");
  if (axis_column[0] < 0 || axis_column[1] < 0 || axis_column[2] < 0) {
    throw Error(ErrorCode::kFormat, "PLY vertex element lacks x/y/z");
  }
  std::vector<Vec3> points;
  points.reserve(vertex_count);
  std::vector<double> row(num_properties);
  for (size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kFormat, "PLY ended before all vertices were read");
    }
    std::istringstream ss(line);
    for (double& value : row) {
      std::string token;
      ss >> token;
      value = token.empty() ? 0.0 : std::strtod(token.c_str(), nullptr);
    }
    points.emplace_back(row[axis_column[0]], row[axis_column[1]], row[axis_column[2]]);
  }
  return points;
}

std::vector<Vec3> ReadXyz(std::istream& in) {
  std::vector<Vec3> points;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::string tokens[3];
    ss >> tokens[0] >> tokens[1] >> tokens[2];
    if (tokens[2].empty()) {
      throw Error(ErrorCode::kFormat, "XYZ line has fewer than 3 values: " + line);
    }
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = std::strtod(tokens[a].c_str(), nullptr);
    points.push_back(p);
  }
  return points;
}

std::vector<Vec3> ReadPointcloud(const std::filesystem::path& path) {
  std::ifstream in = OpenIn(path);
  if (path.extension() == ".ply") return ReadAsciiPly(in);
  return ReadXyz(in);
}

}  // namespace sdfloc
