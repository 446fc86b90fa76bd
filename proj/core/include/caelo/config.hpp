#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "caelo/detect.hpp"
#include "caelo/icp.hpp"
#include "caelo/match.hpp"
#include "caelo/nn/train.hpp"
#include "caelo/sphering.hpp"
#include "caelo/voxels.hpp"

namespace caelo {

struct TrainConfig {
  nn::AdamOptions adam;
  int batch = 32;
  int epochs = 10;
  std::uint64_t seed = 1;
  int crop_rows = 32;           // 2D training crops
  int crop_cols = 128;
  std::size_t crops = 256;      // number of 2D training crops
  std::size_t patches = 500;    // number of 3D training patches
};

struct PathsConfig {
  std::string data_dir = "data";
  std::string weights_2d = "cae2d.weights";
  std::string weights_3d = "cae3d.weights";
  std::string output_dir = "out";
  std::string truth;  // optional ground-truth pose file
};

/// Every tunable of the toolkit. Text form: a first line "caelo-config 1",
/// then "key = value" lines; '#' starts a comment. Unknown keys are errors.
struct Config {
  double delta_alpha_deg = 0.2;
  double delta_beta_deg = 0.4254;
  double beta_down_deg = -24.8;
  int ring_rows = 69;
  double vertical_correction_deg = 0.0;  // 0 disables the correction
  RingCrop crop;
  DetectorParams detector;
  double voxel_base = 0.02;
  int patch_size = 16;
  bool normalize_features = false;
  RansacParams ransac;
  std::size_t min_inliers = 10;  // fewer RANSAC inliers count as a failed match
  IcpParams icp;
  TrainConfig train;
  PathsConfig paths;
  int threads = 1;

  RingParams ring_params() const;
  VoxelResolutionSet voxel_resolutions() const;
  /// Throws std::invalid_argument on an inconsistent setting.
  void validate() const;
};

inline constexpr std::string_view kConfigHeader = "caelo-config 1";

/// Throws ParseError (with line number) on malformed text or unknown keys.
Config parse_config(std::string_view text);
Config read_config(const std::filesystem::path& path);

/// Applies one "key=value" override; throws ParseError.
void apply_override(Config& config, std::string_view assignment);
void set_value(Config& config, std::string_view key, std::string_view value);

/// Full config text. With `annotate`, every key is preceded by a comment
/// describing it and where its default comes from.
std::string format_config(const Config& config, bool annotate = true);

}  // namespace caelo
