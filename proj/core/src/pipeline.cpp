#include "caelo/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "caelo/error.hpp"
#include "caelo/nn/weights.hpp"
#include "caelo/parallel.hpp"
#include "caelo/sphering.hpp"
#include "caelo/voxels.hpp"

namespace caelo {

Models make_models(const Config& config) {
  const RingParams ring = config.ring_params();
  return {nn::make_cae2d(config.crop.rows, ring.cols, config.train.seed),
          nn::make_cae3d(config.patch_size, config.train.seed + 1)};
}

Models load_models(const Config& config) {
  Models m = make_models(config);
  nn::load_weights(m.cae2d.net, config.paths.weights_2d);
  nn::load_weights(m.cae3d.net, config.paths.weights_3d);
  return m;
}

FrameSource directory_source(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".bin") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  FrameSource src;
  src.count = files.size();
  src.load = [files](std::size_t i) { return read_kitti_bin(files.at(i)); };
  return src;
}

FrameRecord process_frame(std::size_t index, const PointCloud& input, const Models& models,
                          const Config& config) {
  PointCloud cloud = input;
  if (config.vertical_correction_deg != 0.0) apply_vertical_correction(cloud, deg2rad(config.vertical_correction_deg));
  const SphericalRing ring = project(cloud, config.ring_params());

  FrameRecord rec;
  rec.index = index;
  rec.points = detect(ring, models.cae2d, config.detector, config.crop);
  rec.eips = extract_eips(ring, rec.points, config.detector.eip_half);

  const VoxelIndexSet voxels = voxelize(cloud, config.voxel_resolutions());
  std::vector<Eigen::Vector3f> xyz;
  xyz.reserve(rec.points.size());
  for (const auto& p : rec.points) xyz.push_back(p.xyz);
  rec.features = batch_describe(xyz, voxels, models.cae3d, {config.normalize_features, 1});
  return rec;
}

namespace {

std::vector<Eigen::Vector3d> positions(const FrameRecord& f) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(f.points.size());
  for (const auto& p : f.points) out.push_back(p.xyz.cast<double>());
  return out;
}

}  // namespace

PipelineResult run_pipeline(const FrameSource& frames, const Models& models, const Config& config,
                            const Trajectory* truth, const std::function<void(const std::string&)>& log) {
  config.validate();
  const std::size_t n = frames.count;
  if (n < 1) throw std::invalid_argument("run_pipeline: no frames");
  if (truth && truth->size() != n) throw std::invalid_argument("ground truth length differs from frame count");

  // Detection and description are independent per frame.
  std::vector<FrameRecord> records(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    records[i] = process_frame(i, frames.load(i), models, config);
  });
  if (log) log("processed " + std::to_string(n) + " frames");

  PipelineResult result;
  result.diagnostics.resize(n);
  std::vector<Pose> relatives(n);  // relatives[m] maps frame m into frame m-1; [0] unused
  std::vector<std::vector<MatchPair>> match_sets(n > 0 ? n - 1 : 0);
  for (std::size_t m = 0; m < n; ++m) {
    FrameDiagnostics& d = result.diagnostics[m];
    d.frame = m;
    d.interest_points = records[m].points.size();
    if (m == 0) continue;

    const auto pairs = nn_match(records[m - 1].features, records[m].features, config.threads);
    d.candidates = pairs.size();
    bool ok = false;
    if (pairs.size() >= config.min_inliers) {
      RansacParams rp = config.ransac;
      rp.seed = config.ransac.seed + 0x9E3779B97F4A7C15ULL * m;
      try {
        const MatchResult mr = ransac_pose(positions(records[m - 1]), positions(records[m]), pairs, rp);
        d.inlier_ratio = mr.inlier_ratio;
        d.iterations = mr.iterations;
        if (mr.inliers.size() >= config.min_inliers) {
          relatives[m] = mr.pose;
          match_sets[m - 1] = mr.inliers;
          ok = true;
        }
      } catch (const NoModelError&) {
      }
    }
    if (!ok) {
      d.fallback = true;
      relatives[m] = m >= 2 ? relatives[m - 1] : Pose();
      if (log) log("frame " + std::to_string(m) + ": matching failed, reusing previous motion");
    }
    if (truth) d.error = rte_rre(relatives[m], relative_pose(*truth, m));
  }
  result.initial = trajectory_from_relatives({relatives.begin() + 1, relatives.end()});

  result.chain.keyframes = select_keyframes(match_sets, n);
  for (std::size_t k : result.chain.keyframes) result.diagnostics[k].keyframe = true;

  const std::size_t segments = result.chain.keyframes.size() - 1;
  result.segments.resize(segments);
  parallel_for(segments, config.threads, [&](std::size_t s) {
    const std::size_t from = result.chain.keyframes[s], to = result.chain.keyframes[s + 1];
    SegmentReport& rep = result.segments[s];
    rep.from = from;
    rep.to = to;
    rep.initial = accumulate(relatives, from + 1, to);
    if (records[from].eips.empty() || records[to].eips.empty()) {
      rep.icp.pose = rep.initial;
      rep.icp.warning = true;
    } else {
      rep.icp = icp_refine(records[from].eips, records[to].eips, rep.initial, config.icp);
    }
  });

  std::vector<Pose> refined = relatives;
  for (const SegmentReport& rep : result.segments) {
    result.chain.refined.push_back(rep.icp.pose);
    const std::span<const Pose> seg(relatives.begin() + static_cast<std::ptrdiff_t>(rep.from) + 1,
                                    relatives.begin() + static_cast<std::ptrdiff_t>(rep.to) + 1);
    const auto updated = backward_update_to(seg, rep.icp.pose);
    std::copy(updated.begin(), updated.end(), refined.begin() + static_cast<std::ptrdiff_t>(rep.from) + 1);
    if (log && rep.icp.warning) {
      log("segment " + std::to_string(rep.from) + "-" + std::to_string(rep.to) + ": ICP stopped early");
    }
  }
  result.refined = trajectory_from_relatives({refined.begin() + 1, refined.end()});
  return result;
}

std::string diagnostics_csv(const PipelineResult& result) {
  std::ostringstream out;
  out << "frame,inlier_ratio,iterations,rte,rre,success,keyframe_flag,fallback\n";
  for (const FrameDiagnostics& d : result.diagnostics) {
    out << d.frame << ',';
    if (d.frame > 0) out << format_real(d.inlier_ratio);
    out << ',' << d.iterations << ',';
    if (d.frame > 0 && d.error) {
      out << format_real(d.error->rte) << ',' << format_real(d.error->rre) << ',' << (is_success(*d.error) ? 1 : 0);
    } else {
      out << ",,";
    }
    out << ',' << (d.keyframe ? 1 : 0) << ',' << (d.fallback ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string keyframes_text(const KeyframeChain& chain) {
  std::ostringstream out;
  for (std::size_t k : chain.keyframes) out << k << '\n';
  return out.str();
}

}  // namespace caelo
