#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "caelo/config.hpp"
#include "caelo/error.hpp"
#include "commands.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kMissing = 2, kRuntime = 3 };

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  int threads = 0;
};

caelo::Config load_config(const Common& common) {
  caelo::Config config;
  if (!common.config_path.empty()) {
    caelo::cli::require_file(common.config_path, "config file");
    config = caelo::read_config(common.config_path);
  }
  for (const auto& o : common.overrides) caelo::apply_override(config, o);
  if (common.threads > 0) config.threads = common.threads;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caelo: LiDAR odometry with auto-encoder interest points and features"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "caelo 0.1.0");

  Common common;
  app.add_option("-c,--config", common.config_path, "Config file (caelo-config 1)");
  app.add_option("-s,--set", common.overrides, "Override one config key: key=value (repeatable)");
  app.add_option("-j,--threads", common.threads, "Worker thread cap (overrides run.threads)")->check(CLI::PositiveNumber);

  caelo::cli::TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one auto-encoder and write its weights and loss history");
  train_cmd->add_option("--which", train.which, "cae2d or cae3d")->required()->check(CLI::IsMember({"cae2d", "cae3d"}));
  train_cmd->add_option("--data", train.data, "Directory of .bin frames (default paths.data_dir)");
  train_cmd->add_option("-o,--out", train.weights_out, "Weight file (default paths.weights_2d / weights_3d)");
  train_cmd->add_option("--loss-csv", train.loss_csv, "Loss history CSV (default <weights>.loss.csv)");

  caelo::cli::DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Detect interest points in one frame");
  detect_cmd->add_option("frame", detect.frame, "KITTI .bin frame")->required();
  detect_cmd->add_option("-o,--out", detect.out, "Point list (default stdout)");
  detect_cmd->add_option("--scores", detect.scores, "Also write the score-map grid here");

  caelo::cli::DescribeArgs describe;
  auto* describe_cmd = app.add_subcommand("describe", "Detect and describe interest points of one frame");
  describe_cmd->add_option("frame", describe.frame, "KITTI .bin frame")->required();
  describe_cmd->add_option("-o,--out", describe.out, "Feature file")->required();

  caelo::cli::MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "Match two feature files and estimate the pose of B in A");
  match_cmd->add_option("a", match.a, "Feature file of frame A")->required();
  match_cmd->add_option("b", match.b, "Feature file of frame B")->required();
  match_cmd->add_option("-o,--out", match.out, "Result file (default stdout)");

  caelo::cli::OdometryArgs odometry;
  auto* odometry_cmd = app.add_subcommand("odometry", "Run the full odometry pipeline over a frame directory");
  odometry_cmd->add_option("--data", odometry.data, "Directory of .bin frames (default paths.data_dir)");
  odometry_cmd->add_option("-o,--out", odometry.out, "Output directory (default paths.output_dir)");
  odometry_cmd->add_option("--truth", odometry.truth, "Ground-truth poses for per-frame errors (default paths.truth)");

  caelo::cli::EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compare an estimated trajectory with ground truth");
  eval_cmd->add_option("estimate", eval.estimate, "Estimated poses (KITTI text)")->required();
  eval_cmd->add_option("truth", eval.truth, "Ground-truth poses (KITTI text)")->required();
  eval_cmd->add_option("-o,--out", eval.out, "Directory for eval.csv, xy.csv and xy.svg");

  caelo::cli::SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Render synthetic frames and ground-truth poses from a scene file");
  synth_cmd->add_option("scene", synth.scene, "Scene file (synthscene v1)")->required();
  synth_cmd->add_option("-n,--frames", synth.frames, "Number of frames")->check(CLI::PositiveNumber);
  synth_cmd->add_option("-m,--motion", synth.motion,
                        "Per-frame motion tx,ty,tz,yaw or tx,ty,tz,roll,pitch,yaw (meters, degrees)")
      ->capture_default_str();
  synth_cmd->add_option("-o,--out", synth.out, "Output directory (velodyne/*.bin and poses.txt)")->required();

  bool plain = false;
  auto* config_cmd = app.add_subcommand("config", "Print the effective configuration");
  config_cmd->add_flag("--plain", plain, "Omit the per-key comments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  auto fail = [](const std::exception& e, int code) {
    std::fprintf(stderr, "caelo: %s\n", e.what());
    return code;
  };
  caelo::Config config;
  if (!*synth_cmd && !*eval_cmd) {
    try {
      config = load_config(common);
    } catch (const caelo::cli::MissingInput& e) {
      return fail(e, kMissing);
    } catch (const caelo::IoError& e) {
      return fail(e, kMissing);
    } catch (const std::exception& e) {
      return fail(e, kUsage);
    }
  }

  try {
    if (*synth_cmd) return caelo::cli::cmd_synth(synth);
    if (*eval_cmd) return caelo::cli::cmd_eval(eval);
    if (*config_cmd) {
      std::cout << caelo::format_config(config, !plain);
      return kOk;
    }
    if (*train_cmd) return caelo::cli::cmd_train(config, train);
    if (*detect_cmd) return caelo::cli::cmd_detect(config, detect);
    if (*describe_cmd) return caelo::cli::cmd_describe(config, describe);
    if (*match_cmd) return caelo::cli::cmd_match(config, match);
    if (*odometry_cmd) return caelo::cli::cmd_odometry(config, odometry);
  } catch (const caelo::cli::MissingInput& e) {
    return fail(e, kMissing);
  } catch (const caelo::cli::UsageError& e) {
    return fail(e, kUsage);
  } catch (const std::exception& e) {
    return fail(e, kRuntime);
  }
  return kUsage;
}
