#include "caelo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "caelo/error.hpp"

namespace caelo {

RingParams Config::ring_params() const {
  return RingParams::from_degrees(delta_alpha_deg, delta_beta_deg, beta_down_deg, ring_rows);
}

VoxelResolutionSet Config::voxel_resolutions() const { return VoxelResolutionSet(voxel_base, patch_size); }

void Config::validate() const {
  ring_params().validate();
  if (crop.row_offset < 0 || crop.rows < 4 || crop.rows % 4 != 0 || crop.row_offset + crop.rows > ring_rows) {
    throw std::invalid_argument("ring crop must be a multiple of 4 rows inside the ring");
  }
  if (ring_params().cols % 4 != 0) throw std::invalid_argument("ring columns must be divisible by 4");
  detector.validate();
  voxel_resolutions();
  if (patch_size % 4 != 0) throw std::invalid_argument("patch size must be divisible by 4");
  ransac.validate();
  if (min_inliers < 3) throw std::invalid_argument("min_inliers must be >= 3");
  icp.validate();
  if (train.batch < 1 || train.epochs < 1) throw std::invalid_argument("train batch and epochs must be >= 1");
  if (train.crop_rows % 4 || train.crop_cols % 4 || train.crop_rows < 4 || train.crop_cols < 4) {
    throw std::invalid_argument("train crop sizes must be positive multiples of 4");
  }
  if (!(train.adam.lr > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

namespace {

enum class Source { published, chosen, path };

struct Field {
  std::string key;
  Source source;
  std::string help;
  std::function<std::string(const Config&)> get;
  std::function<void(Config&, std::string_view)> set;
};

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

template <typename T>
Field number(std::string key, Source src, std::string help, T Config::*member) {
  return {key, src, std::move(help),
          [member](const Config& c) {
            if constexpr (std::is_floating_point_v<T>) return format_real(c.*member);
            else return std::to_string(c.*member);
          },
          [member, key](Config& c, std::string_view v) { c.*member = parse_number<T>(key, v); }};
}

// Accessor-based variant for nested members.
template <typename T, typename Get>
Field nested(std::string key, Source src, std::string help, Get ref) {
  return {key, src, std::move(help),
          [ref](const Config& c) {
            const T& v = ref(const_cast<Config&>(c));
            if constexpr (std::is_floating_point_v<T>) return format_real(v);
            else return std::to_string(v);
          },
          [ref, key](Config& c, std::string_view v) { ref(c) = parse_number<T>(key, v); }};
}

template <typename Get>
Field text(std::string key, std::string help, Get ref) {
  return {key, Source::path, std::move(help), [ref](const Config& c) { return ref(const_cast<Config&>(c)); },
          [ref](Config& c, std::string_view v) { ref(c) = std::string(v); }};
}

const std::vector<Field>& fields() {
  using S = Source;
  static const std::vector<Field> f = {
      number("ring.delta_alpha_deg", S::published, "azimuth resolution of the ring, degrees", &Config::delta_alpha_deg),
      number("ring.delta_beta_deg", S::published, "elevation resolution of the ring, degrees", &Config::delta_beta_deg),
      number("ring.beta_down_deg", S::published, "elevation of the lowest beam, degrees", &Config::beta_down_deg),
      number("ring.rows", S::published, "ring height in rows", &Config::ring_rows),
      nested<int>("ring.crop_row_offset", S::chosen, "first ring row fed to the 2D network",
                  [](Config& c) -> int& { return c.crop.row_offset; }),
      nested<int>("ring.crop_rows", S::chosen, "ring rows fed to the 2D network (multiple of 4)",
                  [](Config& c) -> int& { return c.crop.rows; }),
      number("ingest.vertical_correction_deg", S::chosen,
             "elevation offset added to every point, degrees (0 = off)", &Config::vertical_correction_deg),
      nested<int>("detect.h", S::chosen, "half size of the score neighborhood, pixels",
                  [](Config& c) -> int& { return c.detector.h; }),
      nested<double>("detect.delta", S::published, "minimum interest-point score",
                     [](Config& c) -> double& { return c.detector.delta; }),
      nested<double>("detect.sigma_min", S::published, "minimum interest-point range, meters",
                     [](Config& c) -> double& { return c.detector.sigma_min; }),
      nested<std::size_t>("detect.n_max", S::published, "maximum interest points per frame",
                          [](Config& c) -> std::size_t& { return c.detector.n_max; }),
      nested<int>("detect.eip_half", S::published, "half size of the extended-point window, pixels",
                  [](Config& c) -> int& { return c.detector.eip_half; }),
      number("voxel.base_size", S::published, "finest voxel edge, meters (coarser levels are x8 and x32)",
             &Config::voxel_base),
      number("voxel.patch_size", S::published, "voxels per patch edge", &Config::patch_size),
      {"describe.normalize", S::chosen, "scale features to unit length before matching",
       [](const Config& c) { return std::string(c.normalize_features ? "true" : "false"); },
       [](Config& c, std::string_view v) { c.normalize_features = parse_bool("describe.normalize", v); }},
      nested<double>("ransac.inlier_threshold", S::published, "inlier distance, meters",
                     [](Config& c) -> double& { return c.ransac.inlier_threshold; }),
      nested<int>("ransac.min_iterations", S::published, "minimum RANSAC iterations",
                  [](Config& c) -> int& { return c.ransac.min_iterations; }),
      nested<int>("ransac.max_iterations", S::published, "maximum RANSAC iterations",
                  [](Config& c) -> int& { return c.ransac.max_iterations; }),
      nested<double>("ransac.confidence", S::chosen, "success probability of the adaptive iteration bound",
                     [](Config& c) -> double& { return c.ransac.confidence; }),
      nested<std::uint64_t>("ransac.seed", S::chosen, "RANSAC random seed",
                            [](Config& c) -> std::uint64_t& { return c.ransac.seed; }),
      number("match.min_inliers", S::chosen, "fewer inliers mark a frame pair as failed", &Config::min_inliers),
      nested<int>("icp.max_iterations", S::chosen, "maximum ICP iterations",
                  [](Config& c) -> int& { return c.icp.max_iterations; }),
      nested<double>("icp.initial_threshold", S::chosen, "initial rejection distance, meters",
                     [](Config& c) -> double& { return c.icp.initial_threshold; }),
      nested<double>("icp.decay", S::chosen, "per-iteration factor of the rejection distance",
                     [](Config& c) -> double& { return c.icp.decay; }),
      nested<double>("icp.epsilon", S::chosen, "convergence bound on the pose change",
                     [](Config& c) -> double& { return c.icp.epsilon; }),
      nested<double>("train.lr", S::chosen, "Adam learning rate",
                     [](Config& c) -> double& { return c.train.adam.lr; }),
      nested<double>("train.beta1", S::chosen, "Adam first-moment decay",
                     [](Config& c) -> double& { return c.train.adam.beta1; }),
      nested<double>("train.beta2", S::chosen, "Adam second-moment decay",
                     [](Config& c) -> double& { return c.train.adam.beta2; }),
      nested<double>("train.epsilon", S::chosen, "Adam denominator offset",
                     [](Config& c) -> double& { return c.train.adam.epsilon; }),
      nested<int>("train.batch", S::chosen, "minibatch size", [](Config& c) -> int& { return c.train.batch; }),
      nested<int>("train.epochs", S::published, "training epochs", [](Config& c) -> int& { return c.train.epochs; }),
      nested<std::uint64_t>("train.seed", S::chosen, "seed for initialization, sampling and shuffling",
                            [](Config& c) -> std::uint64_t& { return c.train.seed; }),
      nested<int>("train.crop_rows", S::chosen, "rows of each 2D training crop",
                  [](Config& c) -> int& { return c.train.crop_rows; }),
      nested<int>("train.crop_cols", S::chosen, "columns of each 2D training crop",
                  [](Config& c) -> int& { return c.train.crop_cols; }),
      nested<std::size_t>("train.crops", S::chosen, "number of 2D training crops",
                          [](Config& c) -> std::size_t& { return c.train.crops; }),
      nested<std::size_t>("train.patches", S::chosen, "number of 3D training patches",
                          [](Config& c) -> std::size_t& { return c.train.patches; }),
      text("paths.data_dir", "directory holding .bin frames", [](Config& c) -> std::string& { return c.paths.data_dir; }),
      text("paths.weights_2d", "2D network weight file", [](Config& c) -> std::string& { return c.paths.weights_2d; }),
      text("paths.weights_3d", "3D network weight file", [](Config& c) -> std::string& { return c.paths.weights_3d; }),
      text("paths.output_dir", "directory for results", [](Config& c) -> std::string& { return c.paths.output_dir; }),
      text("paths.truth", "optional ground-truth pose file", [](Config& c) -> std::string& { return c.paths.truth; }),
      number("run.threads", S::chosen, "worker threads", &Config::threads),
  };
  return f;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_value(Config& config, std::string_view key, std::string_view value) {
  for (const Field& f : fields()) {
    if (f.key == key) {
      f.set(config, trim(value));
      return;
    }
  }
  throw ParseError("unknown config key '" + std::string(key) + "'");
}

void apply_override(Config& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ParseError("override must look like key=value: " + std::string(assignment));
  set_value(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

Config parse_config(std::string_view text) {
  Config config;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != kConfigHeader) throw ParseError("expected header '" + std::string(kConfigHeader) + "'", line_no);
      header = true;
      continue;
    }
    try {
      apply_override(config, line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!header) throw ParseError("empty config; expected header '" + std::string(kConfigHeader) + "'");
  return config;
}

Config read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const Config& config, bool annotate) {
  std::ostringstream out;
  out << kConfigHeader << '\n';
  for (const Field& f : fields()) {
    if (annotate) {
      out << "\n# " << f.help;
      if (f.source == Source::published) out << " [published setting]";
      if (f.source == Source::chosen) out << " [toolkit choice]";
      out << '\n';
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
  return out.str();
}

}  // namespace caelo
