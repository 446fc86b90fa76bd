#include "caelo/ingest.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "caelo/error.hpp"

namespace caelo {

namespace {

static_assert(std::endian::native == std::endian::little,
              "KITTI binary decoding assumes a little-endian host");

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

double parse_real(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("not a number: '" + std::string(token) + "'", line);
  }
  return value;
}

}  // namespace

PointCloud read_kitti_bin(const std::filesystem::path& path, LoadStats* stats) {
  const std::vector<char> bytes = slurp(path);
  if (bytes.size() % 16 != 0) {
    throw ParseError(path.string() + ": byte length " + std::to_string(bytes.size()) +
                     " is not a multiple of 16");
  }
  const std::size_t n = bytes.size() / 16;
  PointCloud cloud;
  cloud.points.reserve(n);
  cloud.intensity.reserve(n);
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    float v[4];
    std::memcpy(v, bytes.data() + 16 * i, sizeof(v));
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
      ++dropped;
      continue;
    }
    cloud.points.emplace_back(v[0], v[1], v[2]);
    cloud.intensity.push_back(v[3]);
  }
  if (stats != nullptr) {
    stats->decoded = n;
    stats->dropped_nonfinite = dropped;
  }
  return cloud;
}

void write_kitti_bin(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float v[4] = {cloud.points[i].x(), cloud.points[i].y(), cloud.points[i].z(),
                        cloud.has_intensity() ? cloud.intensity[i] : 0.0f};
    out.write(reinterpret_cast<const char*>(v), sizeof(v));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Trajectory parse_poses(const std::string& text) {
  Trajectory traj;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) values.push_back(parse_real(token, line_no));
    if (values.empty()) continue;
    if (values.size() != 12) {
      throw ParseError("expected 12 values, found " + std::to_string(values.size()), line_no);
    }
    Eigen::Matrix3d r;
    Eigen::Vector3d t;
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) r(row, col) = values[4 * row + col];
      t(row) = values[4 * row + 3];
    }
    try {
      traj.poses.emplace_back(r, t);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return traj;
}

Trajectory read_poses(const std::filesystem::path& path) {
  const std::vector<char> bytes = slurp(path);
  return parse_poses(std::string(bytes.begin(), bytes.end()));
}

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

std::string format_poses(const Trajectory& trajectory) {
  std::string out;
  for (const Pose& p : trajectory.poses) {
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 4; ++col) {
        const double v = col < 3 ? p.rotation()(row, col) : p.translation()(row);
        if (row != 0 || col != 0) out += ' ';
        out += format_real(v);
      }
    }
    out += '\n';
  }
  return out;
}

void write_poses(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_poses(trajectory);
  if (!out) throw IoError("write failed: " + path.string());
}

Trajectory trajectory_from_relatives(const std::vector<Pose>& relatives) {
  Trajectory traj;
  traj.poses.reserve(relatives.size() + 1);
  traj.poses.push_back(Pose::identity());
  for (const Pose& rel : relatives) traj.poses.push_back(compose(traj.poses.back(), rel));
  return traj;
}

void apply_vertical_correction(PointCloud& cloud, double angle) {
  for (Eigen::Vector3f& p : cloud.points) {
    const double x = p.x(), y = p.y(), z = p.z();
    const double horizontal = std::hypot(x, y);
    const double range = std::hypot(horizontal, z);
    if (range == 0.0) continue;
    const double elevation = std::atan2(z, horizontal) + angle;
    const double new_horizontal = range * std::cos(elevation);
    const double scale = horizontal > 0.0 ? new_horizontal / horizontal : 0.0;
    p = Eigen::Vector3f(static_cast<float>(x * scale), static_cast<float>(y * scale),
                        static_cast<float>(range * std::sin(elevation)));
  }
}

}  // namespace caelo
