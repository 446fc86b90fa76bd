#include "caelo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace caelo {

PoseError rte_rre(const Pose& estimated, const Pose& truth) {
  PoseError e;
  e.rte = (estimated.translation() - truth.translation()).norm();
  e.rre = rad2deg(rotation_angle(truth.rotation().transpose() * estimated.rotation()));
  return e;
}

Pose relative_pose(const Trajectory& trajectory, std::size_t i) {
  if (i == 0 || i >= trajectory.size()) throw std::out_of_range("relative pose index");
  return inverse(trajectory.poses[i - 1]) * trajectory.poses[i];
}

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& std) {
  mean = std = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) std += (x - mean) * (x - mean);
  std = std::sqrt(std / static_cast<double>(v.size()));
}

}  // namespace

TrajectoryEvaluation evaluate(const Trajectory& estimate, const Trajectory& truth) {
  if (estimate.size() != truth.size()) {
    throw std::invalid_argument("trajectory lengths differ: " + std::to_string(estimate.size()) +
                                " vs " + std::to_string(truth.size()));
  }
  TrajectoryEvaluation eval;
  std::vector<double> rte, rre;
  std::size_t ok = 0;
  for (std::size_t i = 1; i < estimate.size(); ++i) {
    const PoseError e = rte_rre(relative_pose(estimate, i), relative_pose(truth, i));
    eval.per_frame.push_back(e);
    rte.push_back(e.rte);
    rre.push_back(e.rre);
    ok += is_success(e);
  }
  if (!eval.per_frame.empty()) eval.success_rate = static_cast<double>(ok) / eval.per_frame.size();
  mean_std(rte, eval.rte_mean, eval.rte_std);
  mean_std(rre, eval.rre_mean, eval.rre_std);
  if (!estimate.poses.empty()) eval.endpoint = rte_rre(estimate.poses.back(), truth.poses.back());
  return eval;
}

std::string evaluation_csv(const TrajectoryEvaluation& eval) {
  std::ostringstream out;
  out << "frame,rte,rre,success\n";
  for (std::size_t i = 0; i < eval.per_frame.size(); ++i) {
    const PoseError& e = eval.per_frame[i];
    out << i + 1 << ',' << format_real(e.rte) << ',' << format_real(e.rre) << ',' << (is_success(e) ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string evaluation_summary(const TrajectoryEvaluation& eval) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "pairs: %zu\nsuccess_rate: %.4f\nrte_mean: %.6f\nrte_std: %.6f\nrre_mean: %.6f\n"
                "rre_std: %.6f\nendpoint_rte: %.6f\nendpoint_rre: %.6f\n",
                eval.per_frame.size(), eval.success_rate, eval.rte_mean, eval.rte_std, eval.rre_mean,
                eval.rre_std, eval.endpoint.rte, eval.endpoint.rre);
  return buf;
}

std::string xy_csv(const Trajectory& estimate, const Trajectory& truth) {
  std::ostringstream out;
  out << "frame,est_x,est_y,truth_x,truth_y\n";
  const std::size_t n = std::min(estimate.size(), truth.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = estimate.poses[i].translation();
    const auto& b = truth.poses[i].translation();
    out << i << ',' << format_real(a.x()) << ',' << format_real(a.y()) << ',' << format_real(b.x()) << ','
        << format_real(b.y()) << '\n';
  }
  return out.str();
}

std::string xy_svg(const Trajectory& estimate, const Trajectory& truth) {
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  bool first = true;
  for (const Trajectory* t : {&estimate, &truth}) {
    for (const Pose& p : t->poses) {
      const double x = p.translation().x(), y = p.translation().y();
      if (first) {
        lo_x = hi_x = x;
        lo_y = hi_y = y;
        first = false;
      }
      lo_x = std::min(lo_x, x);
      hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y);
      hi_y = std::max(hi_y, y);
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
  const double size = 600.0, margin = 20.0, scale = (size - 2 * margin) / span;
  auto polyline = [&](const Trajectory& t, const char* color) {
    std::ostringstream out;
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    char buf[64];
    for (const Pose& p : t.poses) {
      const double x = margin + (p.translation().x() - lo_x) * scale;
      const double y = size - margin - (p.translation().y() - lo_y) * scale;
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
      out << buf;
    }
    out << "\"/>\n";
    return out.str();
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << polyline(truth, "black") << polyline(estimate, "red")
      << "  <text x=\"20\" y=\"16\" font-size=\"12\">black: truth, red: estimate</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace caelo
