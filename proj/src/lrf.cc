#include "sdfloc/lrf.h"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sdfloc {

SupportSet CollectSupport(const VectorField& gradients, const VoxelIndex& center,
                          double r_f, double sigma_desc, size_t min_samples) {
  if (!(r_f > 0.0) || !(sigma_desc > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "r_f and sigma_desc must be positive");
  }
  SupportSet out;
  const double inv = 1.0 / (2.0 * sigma_desc * sigma_desc);
  ForEachInSphere(gradients, center, r_f, [&](const VoxelIndex& o, const Vec3& g) {
    const double d2 = double(o.x) * o.x + double(o.y) * o.y + double(o.z) * o.z;
    SupportSample s;
    s.offset = o;
    s.gauss_weight = std::exp(-d2 * inv);
    s.gradient = s.gauss_weight * g;
    out.samples.push_back(s);
  });
  out.insufficient = out.samples.size() < min_samples;
  return out;
}

Mat3 StructureTensor(const std::vector<SupportSample>& samples) {
  Mat3 s = Mat3::Zero();
  for (const SupportSample& sample : samples) {
    s += sample.gradient * sample.gradient.transpose();
  }
  return s;
}

double AxisSignScore(const std::vector<SupportSample>& samples, const Vec3& axis) {
  double num = 0.0;
  double den = 0.0;
  for (const SupportSample& s : samples) {
    const double p = s.gradient.dot(axis);
    num += p;
    den += std::abs(p);
  }
  return den > 0.0 ? num / den : 0.0;
}

namespace {

std::vector<double> Signs(double s, double k_axis) {
  if (s >= k_axis) return {1.0};
  if (s <= -k_axis) return {-1.0};
  return {1.0, -1.0};
}

}  // namespace

LrfAssignment AssignLrfs(const Mat3& structure_tensor,
                         const std::vector<SupportSample>& samples, double k_axis) {
  if (!(k_axis > 0.0 && k_axis < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "k_axis must lie in (0, 1)");
  }
  LrfAssignment out;
  Eigen::SelfAdjointEigenSolver<Mat3> solver(structure_tensor);
  // Ascending from the solver; reorder to descending.
  const Vec3 lambda = solver.eigenvalues().reverse();
  Mat3 v;
  for (int i = 0; i < 3; ++i) v.col(i) = solver.eigenvectors().col(2 - i);

  const double l1 = lambda(0);
  if (!(l1 > 0.0) || lambda(0) - lambda(1) < 1e-9 * l1 ||
      lambda(1) - lambda(2) < 1e-9 * l1) {
    out.degenerate = true;
    return out;
  }
  const Vec3 v1 = v.col(0).normalized();
  const Vec3 v3 = v.col(2).normalized();
  out.s1 = AxisSignScore(samples, v1);
  out.s3 = AxisSignScore(samples, v3);

  const std::vector<double> sign1 = Signs(out.s1, k_axis);
  const std::vector<double> sign3 = Signs(out.s3, k_axis);
  const int count = static_cast<int>(sign1.size() * sign3.size());
  Vec3 eig = lambda;
  for (int i = 0; i < 3; ++i) eig(i) = std::max(eig(i), 0.0);
  for (double a : sign1) {
    for (double c : sign3) {
      const Vec3 a1 = a * v1;
      Vec3 a3 = c * v3;
      // Remove any residual non-orthogonality before completing the frame.
      a3 = (a3 - a3.dot(a1) * a1).normalized();
      const Vec3 a2 = a3.cross(a1);
      Lrf lrf;
      lrf.rotation.row(0) = a1.transpose();
      lrf.rotation.row(1) = a2.transpose();
      lrf.rotation.row(2) = a3.transpose();
      lrf.eigenvalues = eig;
      lrf.ambiguity_count = count;
      out.frames.push_back(lrf);
    }
  }
  return out;
}

int CurvatureClass(const Vec3& eigenvalues) {
  int n = 0;
  for (int i = 0; i < 3; ++i) n += eigenvalues(i) > 0.0 ? 1 : 0;
  return n;
}

}  // namespace sdfloc
