#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "caelo/geometry.hpp"
#include "caelo/match.hpp"

namespace caelo {

/// Sorted, duplicate-free interest-point indices of one frame.
using IndexSet = std::vector<std::size_t>;

/// Indices in the next frame reached from `current` through `pairs`
/// (pairs run from frame m to frame m+1). Empty means the transfer failed.
IndexSet transfer(std::span<const MatchPair> pairs, const IndexSet& current);

/// Frame-side indices of a match set.
IndexSet matched_indices(std::span<const MatchPair> pairs);

struct KeyframeChain {
  std::vector<std::size_t> keyframes;  // strictly increasing, starts at 0
  std::vector<Pose> refined;           // one per segment (keyframes.size() - 1)
};

/// Keyframes from the match sets between consecutive frames
/// (match_sets[m] links frame m to frame m+1, frame_count - 1 entries).
/// Starting from the matched indices of a keyframe, indices are transferred
/// frame by frame; the frame before the first failed transfer becomes the
/// next keyframe. A keyframe whose own match set is empty is followed
/// directly by the next frame. The last frame always closes the chain.
std::vector<std::size_t> select_keyframes(std::span<const std::vector<MatchPair>> match_sets,
                                          std::size_t frame_count);

struct BackwardUpdateReport {
  std::size_t axis_angle_fallbacks = 0;  // fractions computed off the Euler path
};

/// Spreads the change `delta_star` of the segment's end pose over the
/// relative poses T_1..T_n. Frame i ends at fraction i/n of delta_star
/// applied to its original pose; the end pose becomes delta_star * T_{0,n}.
std::vector<Pose> backward_update(std::span<const Pose> relatives, const Pose& delta_star,
                                  BackwardUpdateReport* report = nullptr);

/// Same update expressed through the refined end pose of the segment.
std::vector<Pose> backward_update_to(std::span<const Pose> relatives, const Pose& refined_end,
                                     BackwardUpdateReport* report = nullptr);

}  // namespace caelo
