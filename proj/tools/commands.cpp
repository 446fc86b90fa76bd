#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "caelo/describe.hpp"
#include "caelo/detect.hpp"
#include "caelo/error.hpp"
#include "caelo/ingest.hpp"
#include "caelo/match.hpp"
#include "caelo/metrics.hpp"
#include "caelo/nn/weights.hpp"
#include "caelo/pipeline.hpp"
#include "caelo/synth.hpp"
#include "caelo/training.hpp"

namespace fs = std::filesystem;

namespace caelo::cli {

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void emit(const fs::path& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

std::vector<PointCloud> load_all(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw MissingInput("frame directory not found: " + dir.string());
  const FrameSource src = directory_source(dir);
  if (src.count == 0) throw Error("no .bin frames in " + dir.string());
  std::vector<PointCloud> frames;
  frames.reserve(src.count);
  for (std::size_t i = 0; i < src.count; ++i) frames.push_back(src.load(i));
  return frames;
}

nn::CaeNetwork load_2d(const Config& config) {
  require_file(config.paths.weights_2d, "2D network weights");
  nn::CaeNetwork net = make_models(config).cae2d;
  nn::load_weights(net.net, config.paths.weights_2d);
  return net;
}

Models load_both(const Config& config) {
  require_file(config.paths.weights_2d, "2D network weights");
  require_file(config.paths.weights_3d, "3D network weights");
  return load_models(config);
}

PointCloud load_frame(const Config& config, const fs::path& path) {
  require_file(path, "frame");
  PointCloud cloud = read_kitti_bin(path);
  if (config.vertical_correction_deg != 0.0) apply_vertical_correction(cloud, deg2rad(config.vertical_correction_deg));
  return cloud;
}

Pose parse_motion(const std::string& spec) {
  std::vector<double> v;
  std::stringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("motion spec: bad number '" + tok + "'");
    }
  }
  if (v.size() == 4) return Pose(rot_z(deg2rad(v[3])), {v[0], v[1], v[2]});
  if (v.size() == 6) return Pose(eulers2r({deg2rad(v[3]), deg2rad(v[4]), deg2rad(v[5])}), {v[0], v[1], v[2]});
  throw UsageError("motion spec needs tx,ty,tz,yaw or tx,ty,tz,roll,pitch,yaw (degrees)");
}

}  // namespace

void require_file(const fs::path& path, const std::string& what) {
  if (path.empty() || !fs::exists(path)) throw MissingInput(what + " not found: " + path.string());
}

int cmd_train(const Config& config, const TrainArgs& args) {
  if (args.which != "cae2d" && args.which != "cae3d") throw UsageError("--which must be cae2d or cae3d");
  const bool two_d = args.which == "cae2d";
  const fs::path data = args.data.empty() ? fs::path(config.paths.data_dir) : args.data;
  const fs::path weights = !args.weights_out.empty() ? args.weights_out
                           : two_d                   ? fs::path(config.paths.weights_2d)
                                                     : fs::path(config.paths.weights_3d);
  const fs::path loss_csv = args.loss_csv.empty() ? fs::path(weights.string() + ".loss.csv") : args.loss_csv;

  Models models = make_models(config);
  if (!two_d) models.cae2d = load_2d(config);
  const auto frames = load_all(data);
  const auto samples = two_d ? cae2d_training_set(frames, config) : cae3d_training_set(frames, models.cae2d, config);
  nn::CaeNetwork& net = two_d ? models.cae2d : models.cae3d;

  std::string csv = "epoch,loss\n";
  const auto report = train_network(net, samples, config, [&](int epoch, double loss) {
    csv += std::to_string(epoch) + ',' + format_real(loss) + '\n';
    std::fprintf(stderr, "%s epoch %d loss %.6g\n", args.which.c_str(), epoch, loss);
  });
  if (weights.has_parent_path()) fs::create_directories(weights.parent_path());
  nn::save_weights(net.net, weights);
  write_text(loss_csv, csv);
  std::fprintf(stderr, "%zu samples, loss %.6g -> %.6g, wrote %s\n", samples.size(), report.initial_loss,
               report.final_loss, weights.string().c_str());
  return 0;
}

int cmd_detect(const Config& config, const DetectArgs& args) {
  const PointCloud cloud = load_frame(config, args.frame);
  const nn::CaeNetwork net = load_2d(config);
  const SphericalRing ring = project(cloud, config.ring_params());
  ScoreMap scores;
  const auto points = detect(ring, net, config.detector, config.crop, &scores);
  std::ostringstream out;
  out << "# r c x y z\n";
  for (const PixelPoint& p : points) {
    out << p.r << ' ' << p.c << ' ' << format_real(p.xyz.x()) << ' ' << format_real(p.xyz.y()) << ' '
        << format_real(p.xyz.z()) << '\n';
  }
  emit(args.out, out.str());
  if (!args.scores.empty()) {
    std::ostringstream grid;
    write_score_map(scores, grid);
    write_text(args.scores, grid.str());
  }
  return 0;
}

int cmd_describe(const Config& config, const DescribeArgs& args) {
  const PointCloud cloud = load_frame(config, args.frame);
  const Models models = load_both(config);
  const SphericalRing ring = project(cloud, config.ring_params());
  const auto points = detect(ring, models.cae2d, config.detector, config.crop);
  std::vector<Eigen::Vector3f> xyz;
  for (const PixelPoint& p : points) xyz.push_back(p.xyz);
  const auto features = batch_describe(xyz, voxelize(cloud, config.voxel_resolutions()), models.cae3d,
                                       {config.normalize_features, config.threads});
  if (args.out.has_parent_path()) fs::create_directories(args.out.parent_path());
  write_features(args.out, points, features);
  std::fprintf(stderr, "%zu interest points described\n", points.size());
  return 0;
}

int cmd_match(const Config& config, const MatchArgs& args) {
  require_file(args.a, "feature file");
  require_file(args.b, "feature file");
  std::vector<PixelPoint> pa, pb;
  std::vector<Feature> fa, fb;
  read_features(args.a, pa, fa);
  read_features(args.b, pb, fb);
  const auto pairs = nn_match(fa, fb, config.threads);
  std::vector<Eigen::Vector3d> xa, xb;
  for (const auto& p : pa) xa.push_back(p.xyz.cast<double>());
  for (const auto& p : pb) xb.push_back(p.xyz.cast<double>());
  const MatchResult r = ransac_pose(xa, xb, pairs, config.ransac);
  std::ostringstream out;
  write_match_result(r, out);
  emit(args.out, out.str());
  std::fprintf(stderr, "%zu candidate pairs, %zu inliers after %d iterations\n", pairs.size(), r.inliers.size(),
               r.iterations);
  return 0;
}

int cmd_odometry(const Config& config, const OdometryArgs& args) {
  const fs::path data = args.data.empty() ? fs::path(config.paths.data_dir) : args.data;
  const fs::path out = args.out.empty() ? fs::path(config.paths.output_dir) : args.out;
  const fs::path truth_path = args.truth.empty() ? fs::path(config.paths.truth) : args.truth;
  if (!fs::is_directory(data)) throw MissingInput("frame directory not found: " + data.string());
  const Models models = load_both(config);
  Trajectory truth;
  if (!truth_path.empty()) {
    require_file(truth_path, "ground-truth poses");
    truth = read_poses(truth_path);
  }
  const FrameSource frames = directory_source(data);
  if (frames.count == 0) throw Error("no .bin frames in " + data.string());
  if (!truth_path.empty() && truth.size() != frames.count) {
    throw Error("ground truth has " + std::to_string(truth.size()) + " poses for " + std::to_string(frames.count) +
                " frames");
  }
  const PipelineResult r = run_pipeline(frames, models, config, truth_path.empty() ? nullptr : &truth,
                                        [](const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); });
  fs::create_directories(out);
  write_text(out / "initial.txt", format_poses(r.initial));
  write_text(out / "refined.txt", format_poses(r.refined));
  write_text(out / "diag.csv", diagnostics_csv(r));
  write_text(out / "keyframes.txt", keyframes_text(r.chain));

  std::ostringstream seg;
  seg << "from,to,icp_iterations,correspondences,initial_rms,final_rms,converged,warning\n";
  for (const SegmentReport& s : r.segments) {
    seg << s.from << ',' << s.to << ',' << s.icp.iterations << ',' << s.icp.correspondences << ','
        << format_real(s.icp.initial_rms) << ',' << format_real(s.icp.final_rms) << ',' << (s.icp.converged ? 1 : 0)
        << ',' << (s.icp.warning ? 1 : 0) << '\n';
  }
  write_text(out / "segments.csv", seg.str());
  std::fprintf(stderr, "%zu frames, %zu keyframes, wrote %s\n", frames.count, r.chain.keyframes.size(),
               out.string().c_str());
  return 0;
}

int cmd_eval(const EvalArgs& args) {
  require_file(args.estimate, "estimated trajectory");
  require_file(args.truth, "ground-truth trajectory");
  const Trajectory est = read_poses(args.estimate);
  const Trajectory truth = read_poses(args.truth);
  const TrajectoryEvaluation e = evaluate(est, truth);
  std::cout << evaluation_summary(e);
  if (!args.out.empty()) {
    fs::create_directories(args.out);
    write_text(args.out / "eval.csv", evaluation_csv(e));
    write_text(args.out / "xy.csv", xy_csv(est, truth));
    write_text(args.out / "xy.svg", xy_svg(est, truth));
  }
  return 0;
}

int cmd_synth(const SynthArgs& args) {
  require_file(args.scene, "scene file");
  const SynthSceneSpec scene = read_scene(args.scene);
  const Pose step = parse_motion(args.motion);
  if (args.frames < 1) throw UsageError("--frames must be >= 1");
  const std::vector<Pose> relatives(args.frames - 1, step);
  const Trajectory truth = trajectory_from_relatives(relatives);
  const fs::path bins = args.out / "velodyne";
  fs::create_directories(bins);
  char name[32];
  for (std::size_t i = 0; i < args.frames; ++i) {
    std::snprintf(name, sizeof(name), "%06zu.bin", i);
    write_kitti_bin(synth_scan(scene, truth.poses[i], i), bins / name);
  }
  write_poses(truth, args.out / "poses.txt");
  std::fprintf(stderr, "wrote %zu frames to %s\n", args.frames, bins.string().c_str());
  return 0;
}

}  // namespace caelo::cli
