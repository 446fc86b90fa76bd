#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "caelo/config.hpp"

namespace caelo::cli {

/// A required input file or directory does not exist (exit code 2).
class MissingInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed command arguments (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainArgs {
  std::string which;                  // cae2d or cae3d
  std::filesystem::path data;         // overrides paths.data_dir
  std::filesystem::path weights_out;  // default: configured weight path
  std::filesystem::path loss_csv;     // default: <weights>.loss.csv
};

struct DetectArgs {
  std::filesystem::path frame;
  std::filesystem::path out;     // "r c x y z" per point; stdout when empty
  std::filesystem::path scores;  // optional score-map grid
};

struct DescribeArgs {
  std::filesystem::path frame;
  std::filesystem::path out;
};

struct MatchArgs {
  std::filesystem::path a;
  std::filesystem::path b;
  std::filesystem::path out;  // stdout when empty
};

struct OdometryArgs {
  std::filesystem::path data;
  std::filesystem::path out;
  std::filesystem::path truth;
};

struct EvalArgs {
  std::filesystem::path estimate;
  std::filesystem::path truth;
  std::filesystem::path out;  // eval.csv, xy.csv, xy.svg; skipped when empty
};

struct SynthArgs {
  std::filesystem::path scene;
  std::size_t frames = 1;
  std::string motion = "1,0,0,0";
  std::filesystem::path out;
};

void require_file(const std::filesystem::path& path, const std::string& what);

int cmd_train(const Config& config, const TrainArgs& args);
int cmd_detect(const Config& config, const DetectArgs& args);
int cmd_describe(const Config& config, const DescribeArgs& args);
int cmd_match(const Config& config, const MatchArgs& args);
int cmd_odometry(const Config& config, const OdometryArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_synth(const SynthArgs& args);

}  // namespace caelo::cli
