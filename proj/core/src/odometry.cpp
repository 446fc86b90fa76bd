#include "caelo/odometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "caelo/error.hpp"

namespace caelo {

IndexSet transfer(std::span<const MatchPair> pairs, const IndexSet& current) {
  IndexSet out;
  for (const MatchPair& p : pairs) {
    if (std::binary_search(current.begin(), current.end(), p.a)) out.push_back(p.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexSet matched_indices(std::span<const MatchPair> pairs) {
  IndexSet out;
  out.reserve(pairs.size());
  for (const MatchPair& p : pairs) out.push_back(p.a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> select_keyframes(std::span<const std::vector<MatchPair>> match_sets,
                                          std::size_t frame_count) {
  if (frame_count == 0) throw std::invalid_argument("select_keyframes: no frames");
  if (match_sets.size() + 1 != frame_count) {
    throw std::invalid_argument("select_keyframes: expected one match set per consecutive frame pair");
  }
  const std::size_t last = frame_count - 1;
  std::vector<std::size_t> keys{0};
  std::size_t key = 0;
  IndexSet live = last > 0 ? matched_indices(match_sets[0]) : IndexSet{};
  std::size_t m = 0;
  while (m < last) {
    IndexSet next = transfer(match_sets[m], live);
    if (next.empty()) {
      const std::size_t k = m == key ? m + 1 : m;
      keys.push_back(k);
      key = k;
      m = k;
      if (m < last) live = matched_indices(match_sets[m]);
      continue;
    }
    live = std::move(next);
    ++m;
  }
  if (keys.back() != last) keys.push_back(last);
  return keys;
}

namespace {

Pose fraction_of(const Pose& delta, double f, BackwardUpdateReport* report) {
  try {
    return fractional_pose(delta, f);
  } catch (const GimbalLockError&) {
    if (report) ++report->axis_angle_fallbacks;
    return fractional_pose_axis_angle(delta, f);
  }
}

std::vector<Pose> update(std::span<const Pose> relatives, const Pose& total, const Pose& delta_star,
                         const Pose& refined, BackwardUpdateReport* report) {
  const std::size_t n = relatives.size();

  std::vector<Pose> updated(relatives.begin(), relatives.end());
  Pose prefix;  // product of the updated T_1..T_{i-1}
  for (std::size_t i = 1; i < n; ++i) {
    const Pose target = fraction_of(delta_star, static_cast<double>(i) / static_cast<double>(n), report);
    const Pose head = prefix * relatives[i - 1];
    const Pose tail = accumulate(relatives, i, n - 1);
    const Pose step = inverse(head) * target * total * inverse(tail);
    updated[i - 1] = relatives[i - 1] * step;
    prefix = prefix * updated[i - 1];
  }
  updated[n - 1] = inverse(prefix) * refined;
  return updated;
}

}  // namespace

std::vector<Pose> backward_update(std::span<const Pose> relatives, const Pose& delta_star,
                                  BackwardUpdateReport* report) {
  if (relatives.empty()) throw std::invalid_argument("backward_update: empty segment");
  const Pose total = accumulate(relatives, 0, relatives.size() - 1);
  return update(relatives, total, delta_star, delta_star * total, report);
}

std::vector<Pose> backward_update_to(std::span<const Pose> relatives, const Pose& refined_end,
                                     BackwardUpdateReport* report) {
  if (relatives.empty()) throw std::invalid_argument("backward_update: empty segment");
  const Pose total = accumulate(relatives, 0, relatives.size() - 1);
  return update(relatives, total, refined_end * inverse(total), refined_end, report);
}

}  // namespace caelo
