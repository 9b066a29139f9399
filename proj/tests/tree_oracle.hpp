#pragma once

// Full b^n enumeration of a realized tree, for checking the pruned searches.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "brwlab/brw.hpp"

namespace oracle {

struct Leaf {
  double position;     // S at depth n
  double running_max;  // max_{k ≤ n} S_k, including S_0 = 0
  bool inside;         // predicate held on every level
};

template <class Keep>
void enumerate(const brwlab::StepDistribution& dist, const brwlab::TreeRandomness& rand, int n, Keep keep,
               std::vector<Leaf>& out, std::uint64_t path = 0, int depth = 0, double s = 0.0, double mx = 0.0,
               bool inside = true) {
  inside = inside && keep(depth, s);
  if (depth == n) {
    out.push_back({s, mx, inside});
    return;
  }
  for (int c = 0; c < rand.b(); ++c) {
    const std::uint64_t child = brwlab::TreeRandomness::child_path(path, c);
    const double x = s + rand.edge_value(dist, child, depth + 1);
    enumerate(dist, rand, n, keep, out, child, depth + 1, x, std::max(mx, x), inside);
  }
}

inline std::vector<Leaf> leaves(const brwlab::StepDistribution& dist, const brwlab::TreeRandomness& rand, int n) {
  std::vector<Leaf> out;
  enumerate(dist, rand, n, [](int, double) { return true; }, out);
  return out;
}

inline double offset(const brwlab::StepDistribution& dist, const brwlab::TreeRandomness& rand, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (const Leaf& l : leaves(dist, rand, n)) best = std::min(best, l.running_max);
  return best;
}

inline std::uint64_t count_below(const brwlab::StepDistribution& dist, const brwlab::TreeRandomness& rand, int n,
                                 double barrier) {
  std::vector<Leaf> out;
  enumerate(dist, rand, n, [&](int, double s) { return s <= barrier; }, out);
  return std::count_if(out.begin(), out.end(), [](const Leaf& l) { return l.inside; });
}

inline std::uint64_t count_windows(const brwlab::StepDistribution& dist, const brwlab::TreeRandomness& rand, int n,
                                   const brwlab::WindowSchedule& w) {
  std::vector<Leaf> out;
  enumerate(dist, rand, n, [&](int j, double s) { return w.lower[j] < s && s < w.upper; }, out);
  return std::count_if(out.begin(), out.end(), [](const Leaf& l) { return l.inside; });
}

}  // namespace oracle
