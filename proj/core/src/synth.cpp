#include "caelo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "caelo/error.hpp"

namespace caelo {

namespace {

constexpr double kNoHit = -1.0;

double intersect_plane(const ScenePrimitive& p, const Eigen::Vector3d& o,
                       const Eigen::Vector3d& d, double min_t) {
  if (std::abs(d.z()) < 1e-15) return kNoHit;
  const double t = -o.z() / d.z();
  if (t < min_t) return kNoHit;
  if (p.size.x() > 0.0 || p.size.y() > 0.0) {
    const Eigen::Vector3d hit = o + t * d;
    if (std::abs(hit.x()) > 0.5 * p.size.x() || std::abs(hit.y()) > 0.5 * p.size.y()) {
      return kNoHit;
    }
  }
  return t;
}

double intersect_box(const ScenePrimitive& p, const Eigen::Vector3d& o,
                     const Eigen::Vector3d& d, double min_t) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double half = 0.5 * p.size(axis);
    if (std::abs(d(axis)) < 1e-15) {
      if (std::abs(o(axis)) > half) return kNoHit;
      continue;
    }
    double t0 = (-half - o(axis)) / d(axis);
    double t1 = (half - o(axis)) / d(axis);
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return kNoHit;
  }
  if (t_near >= min_t) return t_near;
  if (t_far >= min_t) return t_far;
  return kNoHit;
}

double intersect_cylinder(const ScenePrimitive& p, const Eigen::Vector3d& o,
                          const Eigen::Vector3d& d, double min_t) {
  const double radius = p.size.x();
  const double height = p.size.y();
  double best = std::numeric_limits<double>::infinity();

  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 1e-15) {
    const double b = 2.0 * (o.x() * d.x() + o.y() * d.y());
    const double c = o.x() * o.x() + o.y() * o.y() - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t < min_t || t >= best) continue;
        const double z = o.z() + t * d.z();
        if (z >= 0.0 && z <= height) best = t;
      }
    }
  }
  if (std::abs(d.z()) > 1e-15) {
    for (double cap : {0.0, height}) {
      const double t = (cap - o.z()) / d.z();
      if (t < min_t || t >= best) continue;
      const double x = o.x() + t * d.x(), y = o.y() + t * d.y();
      if (x * x + y * y <= radius * radius) best = t;
    }
  }
  return std::isfinite(best) ? best : kNoHit;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Pose parse_placement(std::istringstream& in, std::size_t line) {
  double x, y, z, rx, ry, rz;
  if (!(in >> x >> y >> z >> rx >> ry >> rz)) {
    throw ParseError("primitive needs position and XYZ Euler angles (degrees)", line);
  }
  return Pose(eulers2r({deg2rad(rx), deg2rad(ry), deg2rad(rz)}), Eigen::Vector3d(x, y, z));
}

}  // namespace

int SynthSceneSpec::azimuth_count() const {
  return static_cast<int>(std::lround(2.0 * std::numbers::pi / azimuth_step));
}

void SynthSceneSpec::validate() const {
  if (beam_count < 2) throw std::invalid_argument("beam_count must be >= 2");
  if (!(azimuth_step > 0.0)) throw std::invalid_argument("azimuth_step must be > 0");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
  if (!(fov_high > fov_low)) throw std::invalid_argument("vertical_fov must be increasing");
  if (!(max_range > min_range) || min_range < 0.0) {
    throw std::invalid_argument("range limits must satisfy 0 <= min_range < max_range");
  }
}

SynthSceneSpec parse_scene(const std::string& text) {
  SynthSceneSpec scene;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  bool have_step = false, have_fov = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    if (!header) {
      std::string version;
      if (key != "synthscene" || !(fields >> version) || version != "v1") {
        throw ParseError("expected header 'synthscene v1'", line_no);
      }
      header = true;
      continue;
    }
    auto need = [&](auto&... out) {
      if (!((fields >> out) && ...)) throw ParseError("bad value for '" + key + "'", line_no);
    };
    if (key == "beams") {
      need(scene.beam_count);
    } else if (key == "azimuth_step") {
      double deg;
      need(deg);
      scene.azimuth_step = deg2rad(deg);
      have_step = true;
    } else if (key == "vertical_fov") {
      double lo, hi;
      need(lo, hi);
      scene.fov_low = deg2rad(lo);
      scene.fov_high = deg2rad(hi);
      have_fov = true;
    } else if (key == "noise_sigma") {
      need(scene.noise_sigma);
    } else if (key == "seed") {
      need(scene.seed);
    } else if (key == "min_range") {
      need(scene.min_range);
    } else if (key == "max_range") {
      need(scene.max_range);
    } else if (key == "plane") {
      ScenePrimitive p{ScenePrimitive::Kind::plane, parse_placement(fields, line_no), {}};
      double sx, sy;
      if (fields >> sx) {
        if (!(fields >> sy)) throw ParseError("plane extents need sx and sy", line_no);
        p.size = Eigen::Vector3d(sx, sy, 0.0);
      }
      scene.primitives.push_back(p);
    } else if (key == "box") {
      ScenePrimitive p{ScenePrimitive::Kind::box, parse_placement(fields, line_no), {}};
      double sx, sy, sz;
      need(sx, sy, sz);
      if (sx <= 0 || sy <= 0 || sz <= 0) throw ParseError("box extents must be > 0", line_no);
      p.size = Eigen::Vector3d(sx, sy, sz);
      scene.primitives.push_back(p);
    } else if (key == "cylinder") {
      ScenePrimitive p{ScenePrimitive::Kind::cylinder, parse_placement(fields, line_no), {}};
      double radius, height;
      need(radius, height);
      if (radius <= 0 || height <= 0) throw ParseError("cylinder needs radius, height > 0", line_no);
      p.size = Eigen::Vector3d(radius, height, 0.0);
      scene.primitives.push_back(p);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
    std::string extra;
    if (fields >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
  }
  if (!header) throw ParseError("missing 'synthscene v1' header");
  if (!have_step || !have_fov) throw ParseError("azimuth_step and vertical_fov are required");
  try {
    scene.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return scene;
}

SynthSceneSpec read_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string format_scene(const SynthSceneSpec& scene) {
  std::ostringstream out;
  out << "synthscene v1\n";
  out << "beams " << scene.beam_count << '\n';
  out << "azimuth_step " << format_real(rad2deg(scene.azimuth_step)) << '\n';
  out << "vertical_fov " << format_real(rad2deg(scene.fov_low)) << ' '
      << format_real(rad2deg(scene.fov_high)) << '\n';
  out << "noise_sigma " << format_real(scene.noise_sigma) << '\n';
  out << "min_range " << format_real(scene.min_range) << '\n';
  out << "max_range " << format_real(scene.max_range) << '\n';
  out << "seed " << scene.seed << '\n';
  for (const ScenePrimitive& p : scene.primitives) {
    const EulerXYZ e = r2eulers(p.pose.rotation());
    const Eigen::Vector3d& t = p.pose.translation();
    switch (p.kind) {
      case ScenePrimitive::Kind::plane: out << "plane"; break;
      case ScenePrimitive::Kind::box: out << "box"; break;
      case ScenePrimitive::Kind::cylinder: out << "cylinder"; break;
    }
    for (double v : {t.x(), t.y(), t.z(), rad2deg(e.rx), rad2deg(e.ry), rad2deg(e.rz)}) {
      out << ' ' << format_real(v);
    }
    switch (p.kind) {
      case ScenePrimitive::Kind::plane:
        if (p.size.x() > 0.0 || p.size.y() > 0.0) {
          out << ' ' << format_real(p.size.x()) << ' ' << format_real(p.size.y());
        }
        break;
      case ScenePrimitive::Kind::box:
        out << ' ' << format_real(p.size.x()) << ' ' << format_real(p.size.y()) << ' '
            << format_real(p.size.z());
        break;
      case ScenePrimitive::Kind::cylinder:
        out << ' ' << format_real(p.size.x()) << ' ' << format_real(p.size.y());
        break;
    }
    out << '\n';
  }
  return out.str();
}

SynthSceneSpec transform_scene(const SynthSceneSpec& scene, const Pose& transform) {
  SynthSceneSpec moved = scene;
  for (ScenePrimitive& p : moved.primitives) p.pose = compose(transform, p.pose);
  return moved;
}

double intersect(const ScenePrimitive& primitive, const Eigen::Vector3d& origin,
                 const Eigen::Vector3d& dir, double min_t) {
  const Eigen::Matrix3d rt = primitive.pose.rotation().transpose();
  const Eigen::Vector3d o = rt * (origin - primitive.pose.translation());
  const Eigen::Vector3d d = rt * dir;
  switch (primitive.kind) {
    case ScenePrimitive::Kind::plane: return intersect_plane(primitive, o, d, min_t);
    case ScenePrimitive::Kind::box: return intersect_box(primitive, o, d, min_t);
    case ScenePrimitive::Kind::cylinder: return intersect_cylinder(primitive, o, d, min_t);
  }
  return kNoHit;
}

Eigen::Vector3d ray_direction(const SynthSceneSpec& scene, std::uint32_t ray) {
  const int beam = static_cast<int>(ray % static_cast<std::uint32_t>(scene.beam_count));
  const int column = static_cast<int>(ray / static_cast<std::uint32_t>(scene.beam_count));
  const double elevation =
      scene.fov_low + (beam + 0.5) * (scene.fov_high - scene.fov_low) / scene.beam_count;
  const double azimuth = std::numbers::pi - (column + 0.5) * scene.azimuth_step;
  return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
          std::sin(elevation)};
}

ScanResult cast_scan(const SynthSceneSpec& scene, const Pose& sensor_pose, std::uint64_t stream) {
  scene.validate();
  ScanResult result;
  std::mt19937_64 rng(mix_seed(scene.seed, stream));
  std::normal_distribution<double> noise(0.0, 1.0);

  const Eigen::Vector3d origin = sensor_pose.translation();
  const Eigen::Matrix3d& rot = sensor_pose.rotation();
  const auto n_rays = static_cast<std::uint32_t>(scene.azimuth_count() * scene.beam_count);
  for (std::uint32_t ray = 0; ray < n_rays; ++ray) {
    const Eigen::Vector3d dir_sensor = ray_direction(scene, ray);
    const Eigen::Vector3d dir = rot * dir_sensor;
    double best = std::numeric_limits<double>::infinity();
    for (const ScenePrimitive& p : scene.primitives) {
      const double t = intersect(p, origin, dir, scene.min_range);
      if (t >= 0.0 && t < best) best = t;
    }
    if (!(best <= scene.max_range)) continue;
    double range = best;
    if (scene.noise_sigma > 0.0) range += scene.noise_sigma * noise(rng);
    const Eigen::Vector3d p = range * dir_sensor;
    result.cloud.points.emplace_back(p.cast<float>());
    result.rays.push_back(ray);
    result.ranges.push_back(range);
  }
  return result;
}

PointCloud synth_scan(const SynthSceneSpec& scene, const Pose& sensor_pose, std::uint64_t stream) {
  return cast_scan(scene, sensor_pose, stream).cloud;
}

}  // namespace caelo
