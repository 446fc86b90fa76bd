#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "caelo/error.hpp"
#include "caelo/ingest.hpp"

namespace caelo {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "caelo_ingest_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_floats(const std::filesystem::path& p, const std::vector<float>& v) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
}

TEST(Ingest, DecodesPackedQuadruples) {
  const auto p = temp_file("two.bin");
  write_floats(p, {1, 2, 3, 0.5f, 4, 5, 6, 0.1f});
  LoadStats stats;
  const PointCloud c = read_kitti_bin(p, &stats);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.points[0], Eigen::Vector3f(1, 2, 3));
  EXPECT_EQ(c.points[1], Eigen::Vector3f(4, 5, 6));
  EXPECT_EQ(c.intensity[0], 0.5f);
  EXPECT_EQ(c.intensity[1], 0.1f);
  EXPECT_EQ(stats.decoded, 2u);
}

TEST(Ingest, EmptyAndMalformedFiles) {
  const auto empty = temp_file("empty.bin");
  write_floats(empty, {});
  EXPECT_TRUE(read_kitti_bin(empty).empty());

  const auto odd = temp_file("odd.bin");
  write_floats(odd, {1, 2, 3});
  EXPECT_THROW(read_kitti_bin(odd), ParseError);
  EXPECT_THROW(read_kitti_bin(temp_file("missing.bin")), IoError);
}

TEST(Ingest, DropsNonFinitePoints) {
  const auto p = temp_file("nan.bin");
  const float nan = std::numeric_limits<float>::quiet_NaN();
  const float inf = std::numeric_limits<float>::infinity();
  write_floats(p, {1, 2, 3, 0, nan, 0, 0, 0, 0, inf, 0, 0, 7, 8, 9, 1});
  LoadStats stats;
  const PointCloud c = read_kitti_bin(p, &stats);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(stats.dropped_nonfinite, 2u);
  EXPECT_EQ(stats.decoded, 4u);
}

TEST(Ingest, BinRoundTripCountsMatchByteLength) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-50, 50);
  PointCloud c;
  for (int i = 0; i < 1000; ++i) {
    c.points.emplace_back(u(rng), u(rng), u(rng));
    c.intensity.push_back(std::abs(u(rng)) / 50);
  }
  const auto p = temp_file("rt.bin");
  write_kitti_bin(c, p);
  EXPECT_EQ(std::filesystem::file_size(p) / 16, c.size());
  const PointCloud back = read_kitti_bin(p);
  EXPECT_EQ(back.points, c.points);
  EXPECT_EQ(back.intensity, c.intensity);
}

TEST(Ingest, ParsesIdentityPoseLine) {
  const Trajectory t = parse_poses("1 0 0 0 0 1 0 0 0 0 1 0\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.poses[0].matrix(), Eigen::Matrix4d::Identity());
}

TEST(Ingest, PoseParseErrorsCarryLineNumbers) {
  try {
    parse_poses("1 0 0 0 0 1 0 0 0 0 1 0\n\n1 0 0 0 0 1 0 0 0 0 1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_poses("1 0 0 0 0 1 0 0 0 0 1 x\n"), ParseError);
  EXPECT_THROW(parse_poses("1 0 0 0 0 1 0 0 0 0 1 0 5\n"), ParseError);
}

TEST(Ingest, PoseFileRoundTrip) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  Trajectory t;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d axis = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized();
    t.poses.emplace_back(Eigen::AngleAxisd(3 * u(rng), axis).toRotationMatrix(),
                         Eigen::Vector3d(100 * u(rng), 100 * u(rng), 100 * u(rng)));
  }
  const auto p = temp_file("poses.txt");
  write_poses(t, p);
  const Trajectory back = read_poses(p);
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LT((back.poses[i].matrix() - t.poses[i].matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Ingest, TrajectoryFromRelativesStartsAtIdentity) {
  const Trajectory t = trajectory_from_relatives({Pose::translation_only({0.5, 0, 0}), Pose::translation_only({0.5, 0, 0})});
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.poses[0].matrix(), Eigen::Matrix4d::Identity());
  EXPECT_NEAR(t.poses[2].translation().x(), 1.0, 1e-15);
}

TEST(Ingest, VerticalCorrectionKeepsRangeAndAzimuth) {
  PointCloud c;
  c.points.emplace_back(10.0f, 5.0f, -1.0f);
  const Eigen::Vector3f before = c.points[0];
  apply_vertical_correction(c, 0.01);
  const Eigen::Vector3f after = c.points[0];
  EXPECT_NEAR(after.norm(), before.norm(), 1e-4);
  EXPECT_NEAR(std::atan2(after.y(), after.x()), std::atan2(before.y(), before.x()), 1e-6);
  EXPECT_NEAR(std::asin(after.z() / after.norm()) - std::asin(before.z() / before.norm()), 0.01, 1e-5);
}

TEST(Ingest, FormatRealIsShortestRoundTrip) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(1.0), "1");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_real(x)), x);
}

}  // namespace
}  // namespace caelo
