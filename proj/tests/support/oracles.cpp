#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace caelo::testing {

nn::Tensor<double> naive_conv(const nn::LayerSpec& layer, std::span<const double> params,
                              const nn::Tensor<double>& input) {
  const bool volume = input.rank() == 4;
  const int D = volume ? input.dim(0) : 1;
  const int H = input.dim(volume ? 1 : 0);
  const int W = input.dim(volume ? 2 : 1);
  const int C = input.dim(volume ? 3 : 2);
  const int F = layer.units;
  const auto [kd, kh, kw] = layer.window;
  const std::size_t bias_at = static_cast<std::size_t>(kd) * kh * kw * C * F;

  auto in = [&](int d, int h, int w, int c) {
    return input[((static_cast<std::size_t>(d) * H + h) * W + w) * C + c];
  };
  auto weight = [&](int a, int b, int e, int c, int f) {
    return params[((((static_cast<std::size_t>(a) * kh + b) * kw + e) * C + c) * F) + f];
  };
  std::vector<int> shape = volume ? std::vector<int>{D, H, W, F} : std::vector<int>{H, W, F};
  nn::Tensor<double> out(shape);
  for (int d = 0; d < D; ++d)
    for (int h = 0; h < H; ++h)
      for (int w = 0; w < W; ++w)
        for (int f = 0; f < F; ++f) {
          double sum = params[bias_at + f];
          for (int a = 0; a < kd; ++a)
            for (int b = 0; b < kh; ++b)
              for (int e = 0; e < kw; ++e)
                for (int c = 0; c < C; ++c) {
                  const int sd = d + a - kd / 2, sh = h + b - kh / 2, sw = w + e - kw / 2;
                  if (sd < 0 || sd >= D || sh < 0 || sh >= H || sw < 0 || sw >= W) continue;
                  sum += in(sd, sh, sw, c) * weight(a, b, e, c, f);
                }
          switch (layer.activation) {
            case nn::Activation::relu: sum = std::max(0.0, sum); break;
            case nn::Activation::sigmoid: sum = 1.0 / (1.0 + std::exp(-sum)); break;
            case nn::Activation::linear: break;
          }
          out[((static_cast<std::size_t>(d) * H + h) * W + w) * F + f] = sum;
        }
  return out;
}

ScoreMap brute_score_map(const nn::Tensor<float>& resp, std::span<const std::uint8_t> mask, int h) {
  const int H = resp.dim(0), W = resp.dim(1), N = resp.dim(2);
  ScoreMap s;
  s.rows = H;
  s.cols = W;
  s.scores.assign(static_cast<std::size_t>(H) * W, 0.0);
  s.valid.assign(static_cast<std::size_t>(H) * W, 0);
  auto R = [&](int r, int c, int k) { return static_cast<double>(resp[(static_cast<std::size_t>(r) * W + c) * N + k]); };
  auto M = [&](int r, int c) { return mask[static_cast<std::size_t>(r) * W + c] != 0; };
  for (int r = h; r < H - h; ++r) {
    for (int c = h; c < W - h; ++c) {
      if (!M(r, c)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int u = -h; u <= h; ++u) {
        for (int v = -h; v <= h; ++v) {
          if ((u == 0 && v == 0) || !M(r + u, c + v)) continue;
          double sq = 0.0;
          for (int k = 0; k < N; ++k) sq += (R(r, c, k) - R(r + u, c + v, k)) * (R(r, c, k) - R(r + u, c + v, k));
          best = std::min(best, std::sqrt(sq));
        }
      }
      if (std::isfinite(best)) {
        s.scores[static_cast<std::size_t>(r) * W + c] = best;
        s.valid[static_cast<std::size_t>(r) * W + c] = 1;
      }
    }
  }
  return s;
}

std::vector<MatchPair> brute_mutual_nn(std::span<const Feature> a, std::span<const Feature> b) {
  auto dist = [](const Feature& x, const Feature& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (double(x[k]) - double(y[k])) * (double(x[k]) - double(y[k]));
    return s;
  };
  std::vector<MatchPair> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t j_best = 0;
    for (std::size_t j = 1; j < b.size(); ++j) {
      if (dist(a[i], b[j]) < dist(a[i], b[j_best])) j_best = j;
    }
    std::size_t i_back = 0;
    for (std::size_t k = 1; k < a.size(); ++k) {
      if (dist(a[k], b[j_best]) < dist(a[i_back], b[j_best])) i_back = k;
    }
    if (i_back == i) out.push_back({i, j_best, std::sqrt(dist(a[i], b[j_best]))});
  }
  return out;
}

namespace {

// Hit of a ray with the rectangle |u| <= hu, |v| <= hv on plane axis = offset.
double face_hit(const Eigen::Vector3d& o, const Eigen::Vector3d& d, int axis, double offset,
                const Eigen::Vector3d& half) {
  if (d[axis] == 0.0) return -1.0;
  const double t = (offset - o[axis]) / d[axis];
  const Eigen::Vector3d p = o + t * d;
  for (int k = 0; k < 3; ++k) {
    if (k != axis && std::abs(p[k]) > half[k] + 1e-12) return -1.0;
  }
  return t;
}

double primitive_hit(const ScenePrimitive& prim, const Eigen::Vector3d& wo, const Eigen::Vector3d& wd, double min_t) {
  const Eigen::Matrix3d rt = prim.pose.rotation().transpose();
  const Eigen::Vector3d o = rt * (wo - prim.pose.translation());
  const Eigen::Vector3d d = rt * wd;
  std::vector<double> ts;
  switch (prim.kind) {
    case ScenePrimitive::Kind::plane: {
      if (d.z() == 0.0) break;
      const double t = -o.z() / d.z();
      const Eigen::Vector3d p = o + t * d;
      const bool bounded = prim.size.x() > 0.0 || prim.size.y() > 0.0;
      if (!bounded || (std::abs(p.x()) <= prim.size.x() / 2 && std::abs(p.y()) <= prim.size.y() / 2)) ts.push_back(t);
      break;
    }
    case ScenePrimitive::Kind::box: {
      const Eigen::Vector3d half = prim.size / 2;
      for (int axis = 0; axis < 3; ++axis) {
        for (double s : {-1.0, 1.0}) ts.push_back(face_hit(o, d, axis, s * half[axis], half));
      }
      break;
    }
    case ScenePrimitive::Kind::cylinder: {
      const double r = prim.size.x(), h = prim.size.y();
      const double a = d.x() * d.x() + d.y() * d.y();
      const double b = o.x() * d.x() + o.y() * d.y();
      const double c = o.x() * o.x() + o.y() * o.y() - r * r;
      if (a > 0.0 && b * b - a * c >= 0.0) {
        for (double sgn : {-1.0, 1.0}) {
          const double t = (-b + sgn * std::sqrt(b * b - a * c)) / a;
          const double z = o.z() + t * d.z();
          if (z >= 0.0 && z <= h) ts.push_back(t);
        }
      }
      for (double cap : {0.0, h}) {
        if (d.z() == 0.0) continue;
        const double t = (cap - o.z()) / d.z();
        const Eigen::Vector3d p = o + t * d;
        if (p.x() * p.x() + p.y() * p.y() <= r * r) ts.push_back(t);
      }
      break;
    }
  }
  double best = -1.0;
  for (double t : ts) {
    if (t >= min_t && (best < 0.0 || t < best)) best = t;
  }
  return best;
}

}  // namespace

double brute_ray(const SynthSceneSpec& scene, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  double best = -1.0;
  for (const auto& p : scene.primitives) {
    const double t = primitive_hit(p, origin, dir, scene.min_range);
    if (t >= 0.0 && (best < 0.0 || t < best)) best = t;
  }
  return best <= scene.max_range ? best : -1.0;
}

std::vector<double> numeric_gradient(const std::function<double(std::span<const double>)>& f,
                                     std::vector<double> x, double step) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + step;
    const double up = f(x);
    x[i] = keep - step;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

double gradient_relative_error(const nn::BasicNetwork<double>& net, nn::Loss loss,
                               const nn::Tensor<double>& x, const nn::Tensor<double>& target) {
  std::vector<double> grad(net.param_count(), 0.0);
  const auto trace = net.forward_trace(x);
  net.backward(x, trace, nn::loss_gradient(loss, trace.back(), target), grad);

  nn::BasicNetwork<double> probe = net;
  auto f = [&](std::span<const double> p) {
    std::copy(p.begin(), p.end(), probe.params().begin());
    return nn::loss_value(loss, probe.forward(x), target);
  };
  const std::vector<double> start(net.params().begin(), net.params().end());
  const auto numeric = numeric_gradient(f, start, 1e-6);
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    diff += (grad[i] - numeric[i]) * (grad[i] - numeric[i]);
    norm += numeric[i] * numeric[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), std::numeric_limits<double>::min());
}

}  // namespace caelo::testing
