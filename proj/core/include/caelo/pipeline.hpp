#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "caelo/config.hpp"
#include "caelo/describe.hpp"
#include "caelo/icp.hpp"
#include "caelo/ingest.hpp"
#include "caelo/match.hpp"
#include "caelo/nn/cae.hpp"
#include "caelo/odometry.hpp"

namespace caelo {

struct Models {
  nn::CaeNetwork cae2d;
  nn::CaeNetwork cae3d;
};

/// Builds both networks for `config` (random weights from train.seed).
Models make_models(const Config& config);
/// Builds both networks and loads the configured weight files.
Models load_models(const Config& config);

struct FrameSource {
  std::size_t count = 0;
  std::function<PointCloud(std::size_t)> load;
};

/// Frames stored as .bin files in a directory, in file-name order.
FrameSource directory_source(const std::filesystem::path& dir);

/// Per-frame products of detection and description.
struct FrameRecord {
  std::size_t index = 0;
  std::vector<PixelPoint> points;
  std::vector<Feature> features;
  PointCloud eips;
};

FrameRecord process_frame(std::size_t index, const PointCloud& cloud, const Models& models,
                          const Config& config);

struct FrameDiagnostics {
  std::size_t frame = 0;
  std::size_t interest_points = 0;
  std::size_t candidates = 0;  // mutual matches with the previous frame
  double inlier_ratio = 0.0;
  int iterations = 0;
  std::optional<PoseError> error;  // initial relative pose vs truth
  bool keyframe = false;
  bool fallback = false;  // matching failed; previous motion reused
};

struct SegmentReport {
  std::size_t from = 0;
  std::size_t to = 0;
  Pose initial;
  IcpResult icp;
};

struct PipelineResult {
  Trajectory initial;
  Trajectory refined;
  KeyframeChain chain;
  std::vector<FrameDiagnostics> diagnostics;
  std::vector<SegmentReport> segments;
};

/// Frame-to-frame odometry, keyframe refinement and backward update.
/// `truth`, when given, fills the per-frame error columns.
PipelineResult run_pipeline(const FrameSource& frames, const Models& models, const Config& config,
                            const Trajectory* truth = nullptr,
                            const std::function<void(const std::string&)>& log = {});

/// "frame,inlier_ratio,iterations,rte,rre,success,keyframe_flag,fallback"
std::string diagnostics_csv(const PipelineResult& result);
/// One keyframe index per line.
std::string keyframes_text(const KeyframeChain& chain);

}  // namespace caelo
