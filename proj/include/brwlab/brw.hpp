#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brwlab/barrier.hpp"
#include "brwlab/dist.hpp"
#include "brwlab/mix.hpp"

namespace brwlab {

/// Counter-based randomness for a b-ary tree.
///
/// A node is identified by a 64-bit path digest: the root has digest 0 and
/// child c (0-based) of a node with digest p has digest
///   mix64(p ^ (c + 1) · 0xD1B54A32D192ED03).
/// The edge into a node at depth d with digest q receives the uniform
///   to_unit(mix64(mix64(seed) ^ q ^ d · 0xA0761D6478BD642F)),
/// which is then mapped through `sample`. Edge values therefore depend only on
/// (seed, path) and any traversal order sees the same tree.
class TreeRandomness {
 public:
  static constexpr std::uint64_t kChildStride = 0xD1B54A32D192ED03ULL;
  static constexpr std::uint64_t kDepthStride = 0xA0761D6478BD642FULL;

  TreeRandomness(std::uint64_t seed, int b);

  std::uint64_t seed() const noexcept { return seed_; }
  int b() const noexcept { return b_; }

  static constexpr std::uint64_t root_path() noexcept { return 0; }
  static constexpr std::uint64_t child_path(std::uint64_t parent, int c) noexcept {
    return mix64(parent ^ (static_cast<std::uint64_t>(c) + 1) * kChildStride);
  }
  double edge_uniform(std::uint64_t path, int depth) const noexcept {
    return to_unit(mix64(seed_key_ ^ path ^ static_cast<std::uint64_t>(depth) * kDepthStride));
  }
  double edge_value(const StepDistribution& dist, std::uint64_t path, int depth) const {
    return sample(dist, edge_uniform(path, depth));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t seed_key_;
  int b_;
};

struct OffsetResult {
  double l_n;
  double lower_bound;            // L_n > lower_bound is proven; equals l_n when exact
  std::uint64_t nodes_explored;  // node expansions, each generating b edge values
  bool budget_exhausted;
  int n;
  std::uint64_t seed;
};

// L_n = min over depth-n leaves of max_{k≤n} S_{v^k}, by depth-first
// branch-and-bound with iterative deepening on the pruning threshold. The law
// must already be centered. On budget exhaustion l_n is the best leaf found,
// an upper bound on the true value, and lower_bound the largest threshold
// proven infeasible; a final fixed-width beam pass (512 particles per level)
// may run past the budget to tighten the upper bound.
OffsetResult exact_offset(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                          std::uint64_t node_budget);

struct CountResult {
  std::uint64_t count;  // level-n survivors; meaningless when truncated
  bool truncated;
};

// Number of depth-n particles whose whole path satisfies S ≤ barrier.
CountResult count_below_barrier(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                                double barrier, std::uint64_t pop_budget);

/// Per-level open window lower[j] < S < upper for j = 0..n.
struct WindowSchedule {
  std::vector<double> lower;
  double upper;
};

// Windows W_k = ((s_k − δ) n^{1/3}, l2 n^{1/3}). Level j uses window
// min(⌊j / (εn)⌋, 1/ε − 1); a level on a window boundary (j = kεn, k ≥ 1)
// must lie in both adjacent windows. Throws ConfigError when εn < 1 or the
// curve is incomplete.
WindowSchedule window_schedule(const BarrierCurve& curve, double l2, int n);

CountResult count_in_windows(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                             const WindowSchedule& windows, std::uint64_t pop_budget);

CountResult count_windowed(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                           const BarrierCurve& curve, double l2, std::uint64_t pop_budget);

struct ExtremesTrial {
  std::uint64_t seed;
  double min_position;  // m_n
  double max_position;  // M_n
  bool budget_exhausted;
};

struct ExtremesSummary {
  int n;
  std::vector<ExtremesTrial> trials;
  double mean_min_over_n;
  double median_min_over_n;
  double mean_max_over_n;
  double median_max_over_n;
};

// Extreme level-n positions per seed. Bounded laws use branch-and-bound with
// support bounds; unbounded laws are enumerated and limited to n ≤ 14
// (Unsupported otherwise).
ExtremesSummary mc_extremes(const StepDistribution& dist, int b, std::span<const std::uint64_t> seeds, int n,
                            std::uint64_t node_budget = 100'000'000);

}  // namespace brwlab
