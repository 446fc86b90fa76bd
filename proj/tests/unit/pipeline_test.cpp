#include <gtest/gtest.h>

#include "caelo/pipeline.hpp"
#include "caelo/synth.hpp"
#include "scenes.hpp"

namespace caelo {
namespace {

Config small_config() {
  Config c;
  c.detector.n_max = 96;
  c.threads = 2;
  return c;
}

FrameSource source_of(const std::vector<PointCloud>& clouds) {
  return {clouds.size(), [&clouds](std::size_t i) { return clouds.at(i); }};
}

TEST(Pipeline, StaticSequenceStaysAtOrigin) {
  const Config config = small_config();
  const Models models = make_models(config);
  const PointCloud scan = synth_scan(testing::street_scene(21, 120), Pose());
  const std::vector<PointCloud> clouds(3, scan);
  const PipelineResult r = run_pipeline(source_of(clouds), models, config);
  ASSERT_EQ(r.initial.size(), 3u);
  ASSERT_EQ(r.refined.size(), 3u);
  for (const Pose& p : r.refined.poses) {
    EXPECT_LT(p.translation().norm(), 1e-6);
    EXPECT_LT(rotation_angle(p.rotation()), 1e-6);
  }
  EXPECT_EQ(r.chain.keyframes, (std::vector<std::size_t>{0, 2}));
  ASSERT_EQ(r.diagnostics.size(), 3u);
  EXPECT_TRUE(r.diagnostics[0].keyframe);
  EXPECT_FALSE(r.diagnostics[1].keyframe);
  EXPECT_EQ(r.diagnostics[1].inlier_ratio, 1.0);
  EXPECT_FALSE(r.diagnostics[1].fallback);
}

TEST(Pipeline, TwoMovingFramesAndReproducibility) {
  const Config config = small_config();
  const Models models = make_models(config);
  const auto seq = testing::scan_sequence(testing::street_scene(22, 120), testing::street_motion(2, 0.5));
  const PipelineResult a = run_pipeline(source_of(seq.frames), models, config, &seq.truth);
  Config serial = config;
  serial.threads = 1;
  const PipelineResult b = run_pipeline(source_of(seq.frames), models, serial, &seq.truth);
  EXPECT_EQ(diagnostics_csv(a), diagnostics_csv(b));
  EXPECT_EQ(format_poses(a.refined), format_poses(b.refined));
  EXPECT_EQ(a.chain.keyframes, (std::vector<std::size_t>{0, 1}));
  ASSERT_TRUE(a.diagnostics[1].error.has_value());
  const std::string csv = diagnostics_csv(a);
  EXPECT_EQ(csv.rfind("frame,inlier_ratio,iterations,rte,rre,success,keyframe_flag,fallback\n", 0), 0u);
  EXPECT_EQ(keyframes_text(a.chain), "0\n1\n");
}

TEST(Pipeline, ProcessFrameProducesOneFeaturePerPoint) {
  const Config config = small_config();
  const Models models = make_models(config);
  const PointCloud scan = synth_scan(testing::street_scene(23, 120), Pose());
  const FrameRecord rec = process_frame(4, scan, models, config);
  EXPECT_EQ(rec.index, 4u);
  EXPECT_EQ(rec.points.size(), rec.features.size());
  EXPECT_LE(rec.points.size(), 96u);
  EXPECT_GE(rec.eips.size(), rec.points.size());
}

}  // namespace
}  // namespace caelo
