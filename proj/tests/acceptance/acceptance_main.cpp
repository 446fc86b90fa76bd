// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Geometry>

#include "caelo/config.hpp"
#include "caelo/detect.hpp"
#include "caelo/geometry.hpp"
#include "caelo/icp.hpp"
#include "caelo/ingest.hpp"
#include "caelo/match.hpp"
#include "caelo/metrics.hpp"
#include "caelo/nn/cae.hpp"
#include "caelo/nn/train.hpp"
#include "caelo/odometry.hpp"
#include "caelo/pipeline.hpp"
#include "caelo/synth.hpp"
#include "caelo/training.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

namespace fs = std::filesystem;
using namespace caelo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

double run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(t0);
  const bool in_time = t < limit_s;
  const bool pass = o.pass && in_time;
  failures += pass ? 0 : 1;
  std::printf("[%s] C%-2d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), t,
              limit_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
  return t;
}

Pose random_pose(std::mt19937_64& rng, double max_angle, double max_t) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Pose(eulers2r({max_angle * u(rng), max_angle * u(rng), max_angle * u(rng)}),
              {max_t * u(rng), max_t * u(rng), max_t * u(rng)});
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

double max_abs_diff(const Pose& a, const Pose& b) { return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff(); }

// 1. Score map vs direct evaluation of the neighborhood minimum.
Outcome score_map_oracle() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<float> u(-3.0f, 3.0f);
  std::uniform_real_distribution<double> density(0.3, 1.0);
  int exact = 0;
  for (int trial = 0; trial < 200; ++trial) {
    nn::Tensor<float> resp({12, 12, 8});
    for (auto& v : resp.values()) v = u(rng);
    std::bernoulli_distribution keep(density(rng));
    std::vector<std::uint8_t> mask(144);
    for (auto& m : mask) m = keep(rng) ? 1 : 0;
    const ScoreMap a = score_map(resp, mask, 2);
    const ScoreMap b = testing::brute_score_map(resp, mask, 2);
    exact += a.valid == b.valid && a.scores == b.scores;
  }
  return {exact == 200, fmt("%d/200 maps bit-identical", exact)};
}

// 2. Output sizes of every layer of both auto-encoders.
Outcome shape_ledger() {
  using Shapes = std::vector<std::vector<int>>;
  const Shapes table2d = {{64, 1792, 32}, {64, 1792, 8}, {32, 896, 8}, {32, 896, 16}, {16, 448, 16},
                          {16, 448, 16},  {32, 896, 16}, {32, 896, 8}, {64, 1792, 8}, {64, 1792, 3}};
  const Shapes table3d = {{16, 16, 16, 8}, {8, 8, 8, 8},    {8, 8, 8, 16},   {4, 4, 4, 16},
                          {4, 4, 4, 32},   {2048},          {200},           {20},
                          {200},           {2048},          {4, 4, 4, 32},   {4, 4, 4, 16},
                          {8, 8, 8, 16},   {8, 8, 8, 8},    {16, 16, 16, 8}, {16, 16, 16, 1}};
  int checked = 0, bad = 0;
  auto shapes_of = [](const nn::Network& net, std::vector<int> in) {
    Shapes out;
    for (const auto& t : net.forward_trace(nn::Tensor<float>(std::move(in), 0.5f))) out.push_back(t.shape());
    return out;
  };

  const nn::CaeNetwork cae3d = nn::make_cae3d(16, 1);
  const Shapes s3 = shapes_of(cae3d.net, {16, 16, 16, 1});
  bad += s3 != table3d;
  checked += static_cast<int>(table3d.size());

  const nn::CaeNetwork cae2d = nn::make_cae2d(64, 1792, 1);
  const Shapes s2 = shapes_of(cae2d.net, {64, 1792, 3});
  bad += s2 != table2d;
  checked += static_cast<int>(table2d.size());

  // The ring crop used at run time is 68 x 1800; sizes scale with the input.
  const Shapes ring = cae2d.net.layer_shapes({68, 1800, 3});
  for (std::size_t i = 0; i < table2d.size(); ++i) {
    bad += ring[i][0] * 64 != table2d[i][0] * 68 || ring[i][1] * 1792 != table2d[i][1] * 1800 ||
           ring[i][2] != table2d[i][2];
  }
  checked += static_cast<int>(table2d.size());
  return {bad == 0, fmt("%d layer outputs checked, %d mismatches", checked, bad)};
}

// 3. Backpropagation vs central differences.
Outcome gradients() {
  using L = nn::LayerSpec;
  using A = nn::Activation;
  struct Case {
    const char* name;
    std::vector<int> input;
    std::vector<L> layers;
    nn::Loss loss;
  };
  const std::vector<Case> cases = {
      {"conv2d", {5, 6, 3}, {L::conv2d(3, 3, 4, A::relu)}, nn::Loss::mse},
      {"conv3d", {4, 4, 4, 2}, {L::conv3d(3, 3, A::sigmoid)}, nn::Loss::bce},
      {"maxpool", {4, 6, 2}, {L::conv2d(3, 3, 2, A::linear), L::maxpool2d(2)}, nn::Loss::mse},
      {"upsample", {2, 2, 2, 1}, {L::conv3d(3, 2, A::linear), L::upsample3d(2)}, nn::Loss::mse},
      {"dense", {7}, {L::dense(5, A::relu), L::dense(3, A::sigmoid)}, nn::Loss::bce},
      {"flatten+reshape", {2, 2, 2, 2}, {L::flatten(), L::dense(16, A::linear), L::reshape({2, 2, 2, 2})}, nn::Loss::mse},
      {"cae2d", {8, 8, 3}, nn::cae2d_layers({4, 3, 4, 4, 3}), nn::Loss::mse},
      {"cae3d", {8, 8, 8, 1}, nn::cae3d_layers(8, {2, 2, 2, 6, 4}), nn::Loss::bce},
  };
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(-1.0, 1.0), v(0.1, 0.9), b(0.05, 0.3);
  double worst = 0.0;
  std::string worst_name;
  for (const Case& c : cases) {
    nn::BasicNetwork<double> net(c.input, c.layers);
    net.init_glorot(rng());
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
      if (!net.layer(i).has_params()) continue;
      auto p = net.layer_params(i);
      for (std::size_t k = p.size() - static_cast<std::size_t>(net.layer(i).units); k < p.size(); ++k) p[k] = b(rng);
    }
    nn::Tensor<double> x(c.input);
    for (auto& e : x.values()) e = u(rng);
    nn::Tensor<double> target(net.layer_shapes(c.input).back());
    for (auto& e : target.values()) e = v(rng);
    const double err = testing::gradient_relative_error(net, c.loss, x, target);
    if (err >= worst) {
      worst = err;
      worst_name = c.name;
    }
  }
  return {worst < 1e-4, fmt("%zu cases, worst relative error %.2e (%s), bound 1e-4", cases.size(), worst,
                            worst_name.c_str())};
}

// 4. 3D auto-encoder on interest-point patches.
Outcome training_sanity() {
  const auto seq = testing::scan_sequence(testing::street_scene(1004, 120), testing::street_motion(6));
  Config cfg;
  cfg.detector.n_max = 256;
  cfg.train.patches = 500;
  cfg.train.epochs = 10;
  const Models models = make_models(cfg);
  const auto patches = cae3d_training_set(seq.frames, models.cae2d, cfg);
  nn::CaeNetwork net = models.cae3d;
  const auto report = train_network(net, patches, cfg);
  const double first = report.epoch_loss.front();
  const double last = report.epoch_loss.back();
  return {patches.size() == 500 && report.epoch_loss.size() == 10 && last <= 0.5 * first,
          fmt("%zu patches, BCE epoch 1 %.4f -> epoch 10 %.4f (ratio %.3f, bound 0.5)", patches.size(), first, last,
              last / first)};
}

// 5. RANSAC with 60% inliers.
Outcome ransac_recovery() {
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::normal_distribution<double> noise(0.0, 0.02);
  int ok = 0, in_envelope = 0;
  int it_min = 1 << 30, it_max = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Pose truth = random_pose(rng, deg2rad(20.0), 5.0);
    std::vector<Eigen::Vector3d> a, b;
    std::vector<MatchPair> pairs;
    for (std::size_t i = 0; i < 500; ++i) {
      const Eigen::Vector3d p(u(rng), u(rng), 0.2 * u(rng));
      b.push_back(p);
      if (i < 300) {
        a.push_back(truth * p + Eigen::Vector3d(noise(rng), noise(rng), noise(rng)));
      } else {
        a.emplace_back(u(rng), u(rng), 0.2 * u(rng));
      }
      pairs.push_back({i, i, 0.0});
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    RansacParams params;
    params.seed = static_cast<std::uint64_t>(trial);
    const MatchResult r = ransac_pose(a, b, pairs, params);
    const PoseError e = rte_rre(r.pose, truth);
    ok += e.rte < 0.05 && e.rre < 0.1;
    in_envelope += r.iterations >= 100 && r.iterations <= 10000;
    it_min = std::min(it_min, r.iterations);
    it_max = std::max(it_max, r.iterations);
  }
  return {ok >= 49 && in_envelope == 50,
          fmt("%d/50 within 0.05 m / 0.1 deg (need 49), iterations %d..%d", ok, it_min, it_max)};
}

// 6. ICP from the pre-refinement error scale.
Outcome icp_refinement() {
  struct PairSpec {
    std::uint64_t scene;
    Pose motion;
  };
  const std::vector<PairSpec> specs = {
      {2001, Pose(rot_z(deg2rad(1.0)), {3.0, 0.1, 0.0})},
      {2002, Pose(rot_z(deg2rad(-2.0)), {4.0, -0.2, 0.02})},
      {2003, Pose(rot_z(deg2rad(0.5)), {5.0, 0.0, 0.0})},
      {2004, Pose(rot_z(deg2rad(3.0)), {2.0, 0.3, -0.02})},
  };
  std::mt19937_64 rng(1006);
  double worst_t = 0.0, worst_r = 0.0, in_t = 0.0, in_r = 0.0;
  bool warned = false;
  for (const PairSpec& s : specs) {
    const SynthSceneSpec scene = testing::street_scene(s.scene, 120);
    auto decimate = [](const ScanResult& scan) {
      PointCloud out;
      for (std::size_t i = 0; i < scan.cloud.size(); ++i)
        if ((scan.rays[i] / 64) % 2 == 0) out.points.push_back(scan.cloud.points[i]);
      return out;
    };
    const PointCloud a = decimate(cast_scan(scene, Pose(), 0));
    const PointCloud b = decimate(cast_scan(scene, s.motion, 1));
    const Eigen::AngleAxisd rot(deg2rad(0.696), random_unit(rng));
    const Pose error(rot.toRotationMatrix(), 0.354 * random_unit(rng));
    const Pose initial = error * s.motion;
    const PoseError before = rte_rre(initial, s.motion);
    const IcpResult r = icp_refine(a, b, initial, IcpParams{});
    const PoseError after = rte_rre(r.pose, s.motion);
    in_t += before.rte / static_cast<double>(specs.size());
    in_r += before.rre / static_cast<double>(specs.size());
    worst_t = std::max(worst_t, after.rte);
    worst_r = std::max(worst_r, after.rre);
    warned = warned || r.warning;
  }
  return {worst_t < 0.05 && worst_r < 0.1 && !warned,
          fmt("%zu pairs, injected mean %.3f m / %.3f deg, refined worst %.4f m / %.4f deg", specs.size(), in_t, in_r,
              worst_t, worst_r)};
}

// 7. Backward update endpoint and linear interpolation.
Outcome backward_update_properties() {
  std::mt19937_64 rng(1007);
  double end_err = 0.0, lin_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 14);
    std::vector<Pose> rel;
    for (std::size_t i = 0; i < n; ++i) rel.push_back(random_pose(rng, deg2rad(3.0), 2.0));
    const Pose refined = random_pose(rng, deg2rad(2.0), 0.5) * accumulate(rel, 0, n - 1);
    const auto updated = backward_update_to(rel, refined);
    end_err = std::max(end_err, max_abs_diff(accumulate(updated, 0, n - 1), refined));

    std::vector<Pose> tr;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t i = 0; i < n; ++i) tr.push_back(Pose::translation_only({u(rng), u(rng), u(rng)}));
    const Eigen::Vector3d d(u(rng), u(rng), u(rng));
    const auto moved = backward_update(tr, Pose::translation_only(d));
    for (std::size_t i = 1; i <= n; ++i) {
      const Eigen::Vector3d expected =
          accumulate(tr, 0, i - 1).translation() + d * (static_cast<double>(i) / static_cast<double>(n));
      const Pose got = accumulate(moved, 0, i - 1);
      lin_err = std::max(lin_err, (got.translation() - expected).cwiseAbs().maxCoeff());
      lin_err = std::max(lin_err, (got.rotation() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    }
  }
  return {end_err <= 1e-9 && lin_err <= 1e-9,
          fmt("100+100 segments, endpoint error %.1e, translation-only deviation %.1e, bound 1e-9", end_err,
              lin_err)};
}

// 8. Keyframes of hand-traced match chains.
std::vector<MatchPair> parse_links(const std::string& text) {
  std::vector<MatchPair> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto dash = tok.find('-');
    out.push_back({std::stoul(tok.substr(0, dash)), std::stoul(tok.substr(dash + 1)), 0.0});
  }
  return out;
}

Outcome keyframe_chains() {
  struct Chain {
    std::size_t frames;
    std::vector<std::string> sets;
    std::vector<std::size_t> keys;
  };
  std::vector<Chain> chains = {
      {2, {"0-0"}, {0, 1}},
      {2, {""}, {0, 1}},
      {5, {"0-0 1-1", "0-0 1-1", "0-0 1-1", "0-0 1-1"}, {0, 4}},
      {5, {"0-1", "1-2", "2-3", "3-4"}, {0, 4}},
      {5, {"0-1", "0-0", "0-0", "0-0"}, {0, 1, 4}},
      {4, {"0-0", "0-0", "1-1"}, {0, 2, 3}},
      {6, {"0-0 1-1 2-2", "0-5 1-6", "6-1", "1-1", "2-2"}, {0, 4, 5}},
      {5, {"0-0", "", "0-0", "0-0"}, {0, 1, 2, 4}},
      {5, {"", "", "", ""}, {0, 1, 2, 3, 4}},
      {8, {"0-0 1-1 2-2 3-3", "0-0", "0-0", "0-0", "5-5", "5-5", "5-5"}, {0, 4, 7}},
      {6, {"0-0", "1-1", "2-2", "3-3", "4-4"}, {0, 1, 2, 3, 4, 5}},
      {4, {"0-3 1-3 2-3", "3-0", "0-7"}, {0, 3}},
      {7, {"0-1", "1-2", "5-5", "5-6", "6-6", "0-0"}, {0, 2, 5, 6}},
      {1, {}, {0}},
      {4, {"", "0-0", "0-0"}, {0, 1, 3}},
      {5, {"0-0 4-4", "4-2 3-3", "2-9", "9-1 8-8"}, {0, 4}},
      {6, {"0-0", "1-1", "", "2-2", "2-2"}, {0, 1, 2, 3, 5}},
      {20, {}, {0, 7, 13, 19}},
      {3, {"2-5 3-5", "5-1"}, {0, 2}},
      {3, {"0-0", "3-3"}, {0, 1, 2}},
  };
  for (int m = 0; m < 19; ++m) chains[17].sets.push_back(m < 7 ? "0-0" : m < 13 ? "1-1" : "2-2");

  int ok = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    std::vector<std::vector<MatchPair>> sets;
    for (const auto& s : chains[i].sets) sets.push_back(parse_links(s));
    const auto keys = select_keyframes(sets, chains[i].frames);
    if (keys == chains[i].keys) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = fmt(", chain %zu differs", i + 1);
    }
  }
  return {ok == static_cast<int>(chains.size()), fmt("%d/%zu chains reproduced%s", ok, chains.size(), first_bad.c_str())};
}

// 9 and 10. Training plus odometry on a synthetic street.
struct EndToEnd {
  double success_rate = 0.0;
  PoseError initial_end, refined_end;
  std::size_t keyframes = 0;
  std::vector<std::string> files;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

EndToEnd end_to_end(const fs::path& out_dir) {
  const auto seq = testing::scan_sequence(testing::street_scene(7), testing::street_motion(20));
  Config cfg;
  cfg.detector.n_max = 256;
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  Models models = make_models(cfg);
  train_network(models.cae2d, cae2d_training_set(seq.frames, cfg), cfg);
  train_network(models.cae3d, cae3d_training_set(seq.frames, models.cae2d, cfg), cfg);

  const FrameSource source{seq.frames.size(), [&](std::size_t i) { return seq.frames[i]; }};
  const PipelineResult r = run_pipeline(source, models, cfg, &seq.truth);

  fs::create_directories(out_dir);
  write_poses(r.initial, out_dir / "initial.txt");
  write_poses(r.refined, out_dir / "refined.txt");
  std::ofstream(out_dir / "diag.csv") << diagnostics_csv(r);
  std::ofstream(out_dir / "keyframes.txt") << keyframes_text(r.chain);

  EndToEnd e;
  const auto init = evaluate(r.initial, seq.truth);
  const auto refined = evaluate(r.refined, seq.truth);
  e.success_rate = init.success_rate;
  e.initial_end = init.endpoint;
  e.refined_end = refined.endpoint;
  e.keyframes = r.chain.keyframes.size();
  for (const char* f : {"initial.txt", "refined.txt", "diag.csv", "keyframes.txt"}) e.files.push_back(slurp(out_dir / f));
  return e;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "caelo_acceptance";
  fs::remove_all(work);

  run(1, "score map equals brute-force oracle", 10, score_map_oracle);
  run(2, "layer output sizes match both network tables", 1, shape_ledger);
  run(3, "analytic gradients match finite differences", 60, gradients);
  run(4, "3D auto-encoder training halves the epoch-1 loss", 600, training_sanity);
  run(5, "RANSAC recovers the pose at 60% inliers", 30, ransac_recovery);
  run(6, "ICP removes pre-refinement pose error", 60, icp_refinement);
  run(7, "backward update hits the refined pose and interpolates", 5, backward_update_properties);
  run(8, "keyframe selection on hand-traced chains", 1, keyframe_chains);

  EndToEnd first;
  const double e2e_time = run(9, "end-to-end synthetic odometry", 900, [&] {
    first = end_to_end(work / "run1");
    const bool better = first.refined_end.rte <= first.initial_end.rte && first.refined_end.rre <= first.initial_end.rre;
    return Outcome{first.success_rate >= 0.9 && better,
                   fmt("success %.1f%% (need 90%%), endpoint %.3f m / %.3f deg -> %.3f m / %.3f deg, %zu keyframes",
                       100.0 * first.success_rate, first.initial_end.rte, first.initial_end.rre,
                       first.refined_end.rte, first.refined_end.rre, first.keyframes)};
  });
  run(10, "rerun is byte-identical", 2.0 * e2e_time, [&] {
    const EndToEnd second = end_to_end(work / "run2");
    const bool same = !first.files.empty() && first.files == second.files;
    std::size_t bytes = 0;
    for (const auto& f : second.files) bytes += f.size();
    return Outcome{same, fmt("%zu output files, %zu bytes, %s", second.files.size(), bytes,
                             same ? "identical" : "different")};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
