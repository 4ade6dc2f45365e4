#include "sdfloc/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "sdfloc/filtering.h"
#include "sdfloc/isosurface.h"
#include "sdfloc/parallel.h"
#include "sdfloc/scene_synthesis.h"

namespace sdfloc {
namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::kFormat, "bad value for " + key + ": '" + v + "'");
  }
  return out;
}

uint64_t ParseUnsigned(const std::string& key, const std::string& v) {
  uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorCode::kFormat, "bad value for " + key + ": '" + v + "'");
  }
  return out;
}

int ParseInt(const std::string& key, const std::string& v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorCode::kFormat, "bad value for " + key + ": '" + v + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorCode::kFormat, "bad value for " + key + ": '" + v + "'");
}

double RadToDeg(double r) { return r * 180.0 / std::numbers::pi; }

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string PipelineConfig::Serialize() const {
  std::ostringstream out;
  const auto line = [&](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  line("r_f", FormatDouble(r_f));
  line("n_div", std::to_string(n_div));
  line("knn", std::to_string(knn));
  line("alpha_dist", FormatDouble(alpha_dist));
  line("alpha_class", FormatDouble(alpha_class));
  line("sigma_grad", FormatDouble(sigma_grad));
  line("sigma_desc", FormatDouble(sigma_desc));
  line("k_axis", FormatDouble(k_axis));
  line("k_consist", FormatDouble(k_consist));
  if (k_dist) line("k_dist", FormatDouble(*k_dist));
  line("k_overlap", FormatDouble(k_overlap));
  line("max_keypoints", std::to_string(max_keypoints));
  line("ransac_iterations", std::to_string(ransac_iterations));
  line("seed", std::to_string(seed));
  line("min_support", std::to_string(min_support));
  line("fitness_mode", fitness_mode == FitnessMode::kAbsolute ? "absolute" : "signed");
  line("curvature_source",
       curvature_source == CurvatureSource::kHessian ? "hessian" : "structure_tensor");
  line("early_exit", early_exit ? "true" : "false");
  line("fitness_threshold", FormatDouble(fitness_threshold));
  line("pose_gate", FormatDouble(pose_gate));
  line("match_volume", FormatDouble(match_volume));
  return out.str();
}

void PipelineConfig::Set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = Trim(raw_key);
  const std::string v = Trim(raw_value);
  if (key == "r_f") r_f = ParseDouble(key, v);
  else if (key == "n_div") n_div = ParseInt(key, v);
  else if (key == "knn") knn = ParseInt(key, v);
  else if (key == "alpha_dist") alpha_dist = ParseDouble(key, v);
  else if (key == "alpha_class") alpha_class = ParseDouble(key, v);
  else if (key == "sigma_grad") sigma_grad = ParseDouble(key, v);
  else if (key == "sigma_desc") sigma_desc = ParseDouble(key, v);
  else if (key == "k_axis") k_axis = ParseDouble(key, v);
  else if (key == "k_consist") k_consist = ParseDouble(key, v);
  else if (key == "k_dist") k_dist = ParseDouble(key, v);
  else if (key == "k_overlap") k_overlap = ParseDouble(key, v);
  else if (key == "max_keypoints") max_keypoints = ParseInt(key, v);
  else if (key == "ransac_iterations") ransac_iterations = ParseUnsigned(key, v);
  else if (key == "seed") seed = ParseUnsigned(key, v);
  else if (key == "min_support") min_support = ParseInt(key, v);
  else if (key == "fitness_mode") {
    if (v == "absolute") fitness_mode = FitnessMode::kAbsolute;
    else if (v == "signed") fitness_mode = FitnessMode::kSigned;
    else throw Error(ErrorCode::kFormat, "fitness_mode must be absolute or signed");
  } else if (key == "curvature_source") {
    if (v == "hessian") curvature_source = CurvatureSource::kHessian;
    else if (v == "structure_tensor") curvature_source = CurvatureSource::kStructureTensor;
    else throw Error(ErrorCode::kFormat, "curvature_source must be hessian or structure_tensor");
  } else if (key == "early_exit") early_exit = ParseBool(key, v);
  else if (key == "fitness_threshold") fitness_threshold = ParseDouble(key, v);
  else if (key == "pose_gate") pose_gate = ParseDouble(key, v);
  else if (key == "match_volume") match_volume = ParseDouble(key, v);
  else throw Error(ErrorCode::kFormat, "unknown config key '" + key + "'");
}

PipelineConfig PipelineConfig::Parse(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kFormat, "config line without '=': " + line);
    }
    cfg.Set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

PipelineConfig PipelineConfig::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

void PipelineConfig::Validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(r_f > 0, "r_f must be > 0");
  require(n_div >= 2, "n_div must be >= 2");
  require(knn >= 1, "knn must be >= 1");
  require(sigma_grad > 0 && sigma_desc > 0, "sigmas must be > 0");
  require(k_axis > 0 && k_axis < 1, "k_axis must lie in (0, 1)");
  require(k_consist > 0 && k_consist < 1, "k_consist must lie in (0, 1)");
  require(k_overlap >= 0 && k_overlap <= 1, "k_overlap must lie in [0, 1]");
  require(max_keypoints >= 1, "max_keypoints must be >= 1");
  require(ransac_iterations >= 1, "ransac_iterations must be >= 1");
  require(min_support >= 1, "min_support must be >= 1");
  require(fitness_threshold > 0, "fitness_threshold must be > 0");
  require(pose_gate > 0, "pose_gate must be > 0");
  require(!k_dist || *k_dist > 0, "k_dist must be > 0");
}

RansacConfig PipelineConfig::Ransac(int num_threads) const {
  if (!k_dist) throw Error(ErrorCode::kInvalidArgument, "k_dist is required for matching");
  RansacConfig r;
  r.k_neighbors = knn;
  r.k_consist = k_consist;
  r.k_dist = *k_dist;
  r.max_iterations = ransac_iterations;
  r.seed = seed;
  r.early_exit = early_exit;
  r.num_threads = num_threads;
  return r;
}

FeatureExtractor::FeatureExtractor(const SdfSubmap& sdf, const PipelineConfig& cfg,
                                   int num_threads)
    : sdf_(sdf), cfg_(cfg), num_threads_(num_threads) {
  cfg_.Validate();
  if (sdf.empty()) return;
  const ScalarField blurred = BlurDistance(sdf, cfg.sigma_grad, num_threads);
  gradients_ = GradientOfBlurred(blurred, sdf.voxel_size(), num_threads);
  const HessianFields hessian = HessianOfBlurred(blurred, sdf.voxel_size(), num_threads);
  candidates_ = DetectExtrema(DohResponse(hessian), sdf, hessian, num_threads);
  SortByStrength(candidates_);
}

FeatureSet FeatureExtractor::Extract(std::optional<double> d_lim) const {
  FeatureSet out;
  std::vector<Keypoint> pool =
      d_lim ? FilterBySurfaceDistance(candidates_, *d_lim) : candidates_;
  if (pool.size() > size_t(cfg_.max_keypoints)) pool.resize(cfg_.max_keypoints);
  out.keypoints = std::move(pool);

  struct PerKeypoint {
    std::vector<Lrf> lrfs;
    std::vector<Descriptor> descriptors;
    bool insufficient = false;
    bool degenerate = false;
  };
  std::vector<PerKeypoint> per(out.keypoints.size());
  const DescriptorParams params = cfg_.Descriptors();
  ParallelFor(per.size(), num_threads_, [&](size_t i) {
    const Keypoint& kp = out.keypoints[i];
    const SupportSet support = CollectSupport(gradients_, kp.index, cfg_.r_f,
                                              cfg_.sigma_desc, cfg_.min_support);
    if (support.insufficient) {
      per[i].insufficient = true;
      return;
    }
    const Mat3 s = StructureTensor(support.samples);
    const LrfAssignment lrfs = AssignLrfs(s, support.samples, cfg_.k_axis);
    if (lrfs.degenerate) {
      per[i].degenerate = true;
      return;
    }
    const double b_dist = SupportDistance(sdf_, kp.index, cfg_.r_f, cfg_.sigma_desc);
    const int b_class = cfg_.curvature_source == CurvatureSource::kHessian
                            ? CurvatureClass(kp)
                            : CurvatureClass(lrfs.frames.front().eigenvalues);
    for (size_t k = 0; k < lrfs.frames.size(); ++k) {
      Descriptor d =
          DescribeWithDistance(support.samples, lrfs.frames[k], b_dist, b_class, params);
      d.keypoint = kp.index;
      d.position = kp.position;
      d.lrf_ordinal = static_cast<uint8_t>(k);
      per[i].descriptors.push_back(std::move(d));
      per[i].lrfs.push_back(lrfs.frames[k]);
    }
  });
  for (size_t i = 0; i < per.size(); ++i) {
    out.skipped_insufficient += per[i].insufficient;
    out.skipped_degenerate += per[i].degenerate;
    for (size_t k = 0; k < per[i].descriptors.size(); ++k) {
      out.descriptors.push_back(std::move(per[i].descriptors[k]));
      out.lrfs.push_back(per[i].lrfs[k]);
      out.descriptor_keypoint.push_back(i);
    }
  }
  return out;
}

FeatureSet ExtractFeatures(const SdfSubmap& sdf, const PipelineConfig& cfg,
                           int num_threads) {
  return FeatureExtractor(sdf, cfg, num_threads).Extract();
}

IsoSurfaceCloud IsoSurfaceOrEmpty(const SdfSubmap& sdf) {
  if (sdf.empty()) return {{}, true};
  return ExtractIsosurface(sdf);
}

MatchResult MatchPair(const PreparedSubmap& query, const PreparedSubmap& target,
                      const PipelineConfig& cfg, int num_threads) {
  MatchResult r;
  r.query_id = query.submap.id();
  r.target_id = target.submap.id();
  r.decision = Decision::kNoCandidate;
  const RansacConfig rc = cfg.Ransac(num_threads);
  if (query.features.descriptors.empty() || target.features.descriptors.empty()) return r;
  const std::vector<Correspondence> corr = FindCorrespondences(
      query.features.descriptors, target.features.descriptors, cfg.knn, num_threads);
  r.num_correspondences = corr.size();
  if (corr.size() < 3) return r;
  const std::optional<TransformCandidate> best = RansacRegister(corr, rc);
  if (!best) return r;
  r.target_from_query = best->target_from_query;
  r.inlier_count = best->inlier_count;
  const FitnessResult f =
      EvaluateFitness(query.submap, query.iso, target.submap, target.iso,
                      best->target_from_query, cfg.k_overlap, cfg.fitness_mode);
  r.fitness = f.fitness;
  r.overlap_fraction = f.overlap_fraction;
  r.decision = Decide(f, cfg.fitness_threshold);
  return r;
}

FitnessSweep FitnessSweep::Parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "fitness sweep must be lo:hi:n");
  }
  FitnessSweep s;
  s.lo = ParseDouble("fitness-sweep", parts[0]);
  s.hi = ParseDouble("fitness-sweep", parts[1]);
  s.count = ParseInt("fitness-sweep", parts[2]);
  if (s.count < 1 || s.lo < 0 || s.hi < s.lo || (s.count == 1 && s.hi != s.lo)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid fitness sweep " + spec);
  }
  return s;
}

PrPoint ComputePrPoint(const std::vector<PairRecord>& pairs, double threshold,
                       double pose_gate) {
  PrPoint p;
  p.threshold = threshold;
  for (const PairRecord& rec : pairs) {
    const MatchResult& r = rec.result;
    const bool positive = r.fitness && std::abs(*r.fitness) < threshold &&
                          r.decision != Decision::kNoCandidate &&
                          r.decision != Decision::kRejectedOverlap;
    if (positive) {
      const bool good = rec.ground_truth_match && rec.translation_error <= pose_gate;
      (good ? p.tp : p.fp) += 1;
    } else {
      (rec.ground_truth_match ? p.fn : p.tn) += 1;
    }
  }
  if (p.tp + p.fp > 0) p.precision = double(p.tp) / double(p.tp + p.fp);
  if (p.tp + p.fn > 0) p.recall = double(p.tp) / double(p.tp + p.fn);
  return p;
}

std::vector<PrPoint> ComputePrCurve(const std::vector<PairRecord>& pairs,
                                    double pose_gate,
                                    const std::optional<FitnessSweep>& sweep) {
  std::vector<double> thresholds;
  if (sweep) {
    for (int i = 0; i < sweep->count; ++i) {
      thresholds.push_back(sweep->count == 1
                               ? sweep->lo
                               : sweep->lo + (sweep->hi - sweep->lo) * i / (sweep->count - 1));
    }
  } else {
    thresholds.push_back(0.0);
    for (const PairRecord& rec : pairs) {
      if (rec.result.fitness) {
        thresholds.push_back(std::nextafter(std::abs(*rec.result.fitness),
                                            std::numeric_limits<double>::infinity()));
      }
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  }
  std::vector<PrPoint> out;
  for (double t : thresholds) out.push_back(ComputePrPoint(pairs, t, pose_gate));
  return out;
}

double AreaUnderPr(const std::vector<PrPoint>& pr) {
  double area = 0.0;
  double prev_recall = 0.0;
  for (const PrPoint& p : pr) {
    if (!p.precision || !p.recall) continue;
    if (*p.recall > prev_recall) {
      area += (*p.recall - prev_recall) * *p.precision;
      prev_recall = *p.recall;
    }
  }
  return area;
}

namespace {

EvaluationReport EvaluatePrepared(const std::vector<const PreparedSubmap*>& submaps,
                                  const PipelineConfig& cfg, int num_threads,
                                  const std::optional<FitnessSweep>& sweep) {
  if (submaps.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "evaluation needs at least 2 submaps");
  }
  std::vector<size_t> order(submaps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return submaps[a]->submap.id() < submaps[b]->submap.id();
  });
  EvaluationReport report;
  for (size_t a = 0; a < order.size(); ++a) {
    for (size_t b = a + 1; b < order.size(); ++b) {
      const PreparedSubmap& q = *submaps[order[a]];
      const PreparedSubmap& t = *submaps[order[b]];
      PairRecord rec;
      rec.result = MatchPair(q, t, cfg, num_threads);
      const RigidTransform truth = RelativeTransform(q.submap, t.submap);
      rec.overlap_volume = OverlapVolume(q.submap, t.submap, truth);
      rec.ground_truth_match = rec.overlap_volume > cfg.match_volume;
      if (rec.result.decision != Decision::kNoCandidate) {
        rec.translation_error = rec.result.target_from_query.TranslationDistanceTo(truth);
        rec.rotation_error_deg =
            RadToDeg(rec.result.target_from_query.RotationAngleTo(truth));
      }
      report.pairs.push_back(rec);
    }
  }
  report.pr = ComputePrCurve(report.pairs, cfg.pose_gate, sweep);
  report.auc = AreaUnderPr(report.pr);
  return report;
}

}  // namespace

std::vector<PreparedSubmap> PrepareCollection(const std::vector<SdfSubmap>& submaps,
                                              const PipelineConfig& cfg,
                                              int num_threads) {
  std::vector<PreparedSubmap> out;
  out.reserve(submaps.size());
  for (const SdfSubmap& s : submaps) {
    PreparedSubmap p;
    p.submap = s;
    p.iso = IsoSurfaceOrEmpty(s);
    p.features = ExtractFeatures(p.submap, cfg, num_threads);
    out.push_back(std::move(p));
  }
  return out;
}

EvaluationReport EvaluateCollection(const std::vector<PreparedSubmap>& submaps,
                                    const PipelineConfig& cfg, int num_threads,
                                    const std::optional<FitnessSweep>& sweep) {
  std::vector<const PreparedSubmap*> ptrs;
  for (const PreparedSubmap& s : submaps) ptrs.push_back(&s);
  return EvaluatePrepared(ptrs, cfg, num_threads, sweep);
}

std::vector<double> DefaultAblationLimits() {
  return {std::numeric_limits<double>::infinity(), 0.30, 0.25, 0.20, 0.15, 0.10, 0.05};
}

AblationRow EvaluateWithLimit(const std::vector<SdfSubmap>& submaps,
                              const std::vector<FeatureExtractor>& extractors,
                              const std::vector<IsoSurfaceCloud>& isos,
                              const PipelineConfig& cfg, double d_lim, int num_threads,
                              const std::optional<FitnessSweep>& sweep) {
  AblationRow row;
  row.d_lim = d_lim;
  std::vector<PreparedSubmap> prepared(submaps.size());
  for (size_t i = 0; i < submaps.size(); ++i) {
    prepared[i].submap = submaps[i];
    prepared[i].iso = isos[i];
    prepared[i].features = std::isinf(d_lim) ? extractors[i].Extract()
                                             : extractors[i].Extract(d_lim);
    row.total_keypoints += prepared[i].features.keypoints.size();
  }
  row.report = EvaluateCollection(prepared, cfg, num_threads, sweep);
  return row;
}

std::vector<AblationRow> AblateFreespace(const std::vector<SdfSubmap>& submaps,
                                         const PipelineConfig& cfg,
                                         const std::vector<double>& d_lims,
                                         int num_threads,
                                         const std::optional<FitnessSweep>& sweep) {
  std::vector<FeatureExtractor> extractors;
  std::vector<IsoSurfaceCloud> isos;
  extractors.reserve(submaps.size());
  for (const SdfSubmap& s : submaps) {
    extractors.emplace_back(s, cfg, num_threads);
    isos.push_back(IsoSurfaceOrEmpty(s));
  }
  std::vector<AblationRow> rows;
  for (double d : d_lims) {
    if (!(d > 0.0)) throw Error(ErrorCode::kInvalidArgument, "d_lim must be positive");
    rows.push_back(EvaluateWithLimit(submaps, extractors, isos, cfg, d, num_threads, sweep));
  }
  return rows;
}

namespace {

std::string Opt(const std::optional<double>& v) { return v ? FormatDouble(*v) : ""; }

}  // namespace

std::string PairsCsv(const std::vector<PairRecord>& pairs) {
  std::ostringstream out;
  out << "query_id,target_id,decision,num_correspondences,inlier_count,fitness,"
         "overlap_fraction,tx,ty,tz,overlap_volume,ground_truth_match,"
         "translation_error,rotation_error_deg\n";
  for (const PairRecord& p : pairs) {
    const MatchResult& r = p.result;
    const Vec3& t = r.target_from_query.translation();
    const bool has_t = r.decision != Decision::kNoCandidate;
    out << r.query_id << ',' << r.target_id << ',' << DecisionName(r.decision) << ','
        << r.num_correspondences << ',' << r.inlier_count << ',' << Opt(r.fitness) << ','
        << FormatDouble(r.overlap_fraction) << ','
        << (has_t ? FormatDouble(t.x()) : "") << ','
        << (has_t ? FormatDouble(t.y()) : "") << ','
        << (has_t ? FormatDouble(t.z()) : "") << ','
        << FormatDouble(p.overlap_volume) << ',' << (p.ground_truth_match ? 1 : 0) << ','
        << (has_t ? FormatDouble(p.translation_error) : "") << ','
        << (has_t ? FormatDouble(p.rotation_error_deg) : "") << '\n';
  }
  return out.str();
}

std::string PrCsv(const std::vector<PrPoint>& pr) {
  std::ostringstream out;
  out << "threshold,tp,fp,fn,tn,precision,recall\n";
  for (const PrPoint& p : pr) {
    out << FormatDouble(p.threshold) << ',' << p.tp << ',' << p.fp << ',' << p.fn << ','
        << p.tn << ',' << Opt(p.precision) << ',' << Opt(p.recall) << '\n';
  }
  return out.str();
}

std::string KeypointsCsv(const std::vector<PreparedSubmap>& submaps) {
  std::ostringstream out;
  out << "submap_id,ix,iy,iz,x,y,z,response,sdf,e1,e2,e3,num_descriptors\n";
  for (const PreparedSubmap& s : submaps) {
    const FeatureSet& f = s.features;
    std::vector<size_t> counts(f.keypoints.size(), 0);
    for (size_t k : f.descriptor_keypoint) ++counts[k];
    for (size_t i = 0; i < f.keypoints.size(); ++i) {
      const Keypoint& kp = f.keypoints[i];
      out << s.submap.id() << ',' << kp.index.x << ',' << kp.index.y << ',' << kp.index.z
          << ',' << FormatDouble(kp.position.x()) << ',' << FormatDouble(kp.position.y())
          << ',' << FormatDouble(kp.position.z()) << ',' << FormatDouble(kp.response)
          << ',' << FormatDouble(kp.sdf_value) << ',' << FormatDouble(kp.hessian_eigs(0))
          << ',' << FormatDouble(kp.hessian_eigs(1)) << ','
          << FormatDouble(kp.hessian_eigs(2)) << ',' << counts[i] << '\n';
    }
  }
  return out.str();
}

std::string LrfDump(const FeatureSet& features) {
  std::ostringstream out;
  out << "ix,iy,iz,ordinal,r00,r01,r02,r10,r11,r12,r20,r21,r22,l1,l2,l3\n";
  for (size_t i = 0; i < features.lrfs.size(); ++i) {
    const Descriptor& d = features.descriptors[i];
    const Lrf& l = features.lrfs[i];
    out << d.keypoint.x << ',' << d.keypoint.y << ',' << d.keypoint.z << ','
        << int(d.lrf_ordinal);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out << ',' << FormatDouble(l.rotation(r, c));
    }
    for (int k = 0; k < 3; ++k) out << ',' << FormatDouble(l.eigenvalues(k));
    out << '\n';
  }
  return out.str();
}

std::string AblationCsv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "d_lim,total_keypoints,auc\n";
  for (const AblationRow& r : rows) {
    out << FormatDouble(r.d_lim) << ',' << r.total_keypoints << ','
        << FormatDouble(r.report.auc) << '\n';
  }
  return out.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace sdfloc
