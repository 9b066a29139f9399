#include "brwlab/brw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "brwlab/errors.hpp"
#include "brwlab/stats.hpp"

namespace brwlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBeamWidth = 512;

struct Child {
  double key;  // running path maximum including this child
  double s;    // position
  std::uint64_t path;
};

// Children of (s, mu, path) at `depth + 1`, sorted ascending by key; ties keep
// child-index order.
void expand(const StepDistribution& dist, const TreeRandomness& rand, int depth, double s, double mu,
            std::uint64_t path, Child* out) {
  const int b = rand.b();
  for (int c = 0; c < b; ++c) {
    const std::uint64_t cp = TreeRandomness::child_path(path, c);
    const double pos = s + rand.edge_value(dist, cp, depth + 1);
    out[c] = {std::max(mu, pos), pos, cp};
  }
  for (int i = 1; i < b; ++i) {
    const Child x = out[i];
    int j = i;
    for (; j > 0 && out[j - 1].key > x.key; --j) out[j] = out[j - 1];
    out[j] = x;
  }
}

// Level-order sweep keeping particles for which keep(level, position) holds at
// every level 0..n.
template <typename Keep>
CountResult sweep_levels(const StepDistribution& dist, const TreeRandomness& rand, int n, std::uint64_t pop_budget,
                         Keep keep) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  if (!keep(0, 0.0)) return {0, false};
  if (n == 0) return {1, false};

  struct Particle {
    double s;
    std::uint64_t path;
  };
  std::vector<Particle> frontier{{0.0, TreeRandomness::root_path()}};
  std::vector<Particle> next;
  const int b = rand.b();
  for (int level = 1; level < n; ++level) {
    next.clear();
    for (const Particle& p : frontier) {
      for (int c = 0; c < b; ++c) {
        const std::uint64_t cp = TreeRandomness::child_path(p.path, c);
        const double pos = p.s + rand.edge_value(dist, cp, level);
        if (keep(level, pos)) next.push_back({pos, cp});
      }
      if (next.size() > pop_budget) return {0, true};
    }
    frontier.swap(next);
    if (frontier.empty()) return {0, false};
  }
  std::uint64_t count = 0;
  for (const Particle& p : frontier) {
    for (int c = 0; c < b; ++c) {
      const std::uint64_t cp = TreeRandomness::child_path(p.path, c);
      if (keep(n, p.s + rand.edge_value(dist, cp, n))) ++count;
    }
  }
  return {count, false};
}

// Minimum over depth-n leaves of sign·S_v by branch-and-bound, pruning with the
// support bound S + remaining·step_floor (step_floor = −inf disables pruning).
struct LeafSearch {
  double best;
  bool exhausted;
};

LeafSearch min_leaf(const StepDistribution& dist, const TreeRandomness& rand, int n, double sign, double step_floor,
                    std::uint64_t node_budget) {
  if (n == 0) return {0.0, false};
  const int b = rand.b();
  struct Frame {
    double s;
    std::uint64_t path;
    int next;
  };
  std::vector<Frame> stack;
  std::vector<double> values(static_cast<std::size_t>(n) * b);
  stack.reserve(n);
  double best = kInf;
  std::uint64_t expansions = 0;

  const auto open = [&](double s, std::uint64_t path) {
    const int depth = static_cast<int>(stack.size());
    double* x = &values[static_cast<std::size_t>(depth) * b];
    for (int c = 0; c < b; ++c)
      x[c] = sign * rand.edge_value(dist, TreeRandomness::child_path(path, c), depth + 1);
    stack.push_back({s, path, 0});
    ++expansions;
  };

  open(0.0, TreeRandomness::root_path());
  while (!stack.empty()) {
    Frame& f = stack.back();
    const int depth = static_cast<int>(stack.size()) - 1;
    if (f.next == b) {
      stack.pop_back();
      continue;
    }
    const int c = f.next++;
    const double s = f.s + values[static_cast<std::size_t>(depth) * b + c];
    if (depth + 1 == n) {
      best = std::min(best, s);
      continue;
    }
    if (s + (n - depth - 1) * step_floor >= best) continue;
    if (expansions >= node_budget) return {best, true};
    open(s, TreeRandomness::child_path(f.path, c));
  }
  return {best, false};
}

}  // namespace

TreeRandomness::TreeRandomness(std::uint64_t seed, int b) : seed_(seed), seed_key_(mix64(seed)), b_(b) {
  if (b < 2) throw std::invalid_argument("branching factor b must be at least 2");
}

OffsetResult exact_offset(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                          std::uint64_t node_budget) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  OffsetResult result{0.0, 0.0, 0, false, n, rand.seed()};
  if (n == 0) return result;

  const int b = rand.b();
  std::vector<Child> buf(static_cast<std::size_t>(n) * b);
  std::vector<int> next(n, 0);

  // Greedy descent gives a finite incumbent before the search starts.
  double s = 0.0, mu = 0.0;
  std::uint64_t path = TreeRandomness::root_path();
  for (int depth = 0; depth < n; ++depth) {
    expand(dist_centered, rand, depth, s, mu, path, buf.data());
    ++result.nodes_explored;
    s = buf[0].s;
    mu = buf[0].key;
    path = buf[0].path;
  }
  const double greedy = mu;
  // Running maxima are ≥ 0 from the root, so an incumbent of 0 is optimal.
  if (greedy == 0.0) return result;

  // One depth-first pass pruning every node whose running maximum is ≥ bound.
  // Leaves found below the bound tighten it.
  struct Pass {
    double bound;
    bool found;
    double min_pruned;  // smallest pruned running maximum, for the next threshold
    bool exhausted;
  };
  const auto dfs = [&](double bound) {
    Pass pass{bound, false, kInf, false};
    expand(dist_centered, rand, 0, 0.0, 0.0, TreeRandomness::root_path(), buf.data());
    ++result.nodes_explored;
    next[0] = 0;
    int depth = 0;
    while (depth >= 0) {
      Child* frame = &buf[static_cast<std::size_t>(depth) * b];
      int& i = next[depth];
      if (i == b || frame[i].key >= pass.bound) {
        if (i < b) pass.min_pruned = std::min(pass.min_pruned, frame[i].key);
        --depth;
        continue;
      }
      const Child child = frame[i++];
      if (depth + 1 == n) {
        pass.bound = child.key;
        pass.found = true;
        continue;
      }
      if (result.nodes_explored >= node_budget) {
        pass.exhausted = true;
        break;
      }
      ++depth;
      expand(dist_centered, rand, depth, child.s, child.key, child.path, &buf[static_cast<std::size_t>(depth) * b]);
      ++result.nodes_explored;
      next[depth] = 0;
    }
    return pass;
  };

  // Iterative deepening on the threshold: a pass admitting running maxima
  // ≤ x either finds the optimum (then exact) or proves L_n > x. The step
  // adapts so each pass costs a few times the previous one; the last pass
  // falls back to plain branch-and-bound against the greedy incumbent.
  const double step_scale = std::sqrt(log_mgf_derivs(dist_centered, 0.0).second);
  double step = step_scale;
  // Small trees go straight to the single pass: re-expanding nodes across
  // passes would cost more than the whole tree.
  const bool small_tree = n * std::log2(static_cast<double>(b)) <= 20.0;
  double threshold = small_tree ? greedy : 0.0;
  std::uint64_t prev_cost = 1;
  while (true) {
    const bool last = threshold >= greedy;
    const std::uint64_t before = result.nodes_explored;
    const Pass pass = dfs(last ? greedy : std::nextafter(threshold, kInf));
    if (pass.exhausted) {
      result.budget_exhausted = true;
      result.l_n = pass.found ? pass.bound : greedy;
      break;
    }
    if (pass.found || last) {
      result.l_n = pass.found ? pass.bound : greedy;
      result.lower_bound = result.l_n;
      return result;
    }
    result.lower_bound = threshold;
    const std::uint64_t cost = result.nodes_explored - before;
    if (cost < 2 * prev_cost) step *= 2.0;
    else if (cost > 8 * prev_cost) step = std::max(0.5 * step, 1e-3 * step_scale);
    prev_cost = std::max<std::uint64_t>(cost, 1);
    threshold = std::min(std::max(threshold + step, pass.min_pruned), greedy);
  }

  // Budget exhausted: tighten the reported upper bound with a fixed-width beam
  // that keeps the particles with the lowest running maximum.
  struct Particle {
    double s;
    double mu;
    std::uint64_t path;
  };
  std::vector<Particle> beam{{0.0, 0.0, TreeRandomness::root_path()}};
  std::vector<Particle> next_beam;
  std::vector<Child> kids(b);
  for (int depth = 0; depth < n && !beam.empty(); ++depth) {
    next_beam.clear();
    for (const Particle& p : beam) {
      expand(dist_centered, rand, depth, p.s, p.mu, p.path, kids.data());
      ++result.nodes_explored;
      for (const Child& k : kids)
        if (k.key < result.l_n) next_beam.push_back({k.s, k.key, k.path});
    }
    if (next_beam.size() > kBeamWidth) {
      std::nth_element(next_beam.begin(), next_beam.begin() + kBeamWidth, next_beam.end(),
                       [](const Particle& x, const Particle& y) { return x.mu < y.mu; });
      next_beam.resize(kBeamWidth);
    }
    beam.swap(next_beam);
  }
  for (const Particle& p : beam) result.l_n = std::min(result.l_n, p.mu);
  return result;
}

CountResult count_below_barrier(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                                double barrier, std::uint64_t pop_budget) {
  return sweep_levels(dist_centered, rand, n, pop_budget, [barrier](int, double s) { return s <= barrier; });
}

WindowSchedule window_schedule(const BarrierCurve& curve, double l2, int n) {
  const int k_max = curve.inv_epsilon;
  if (n < k_max) throw ConfigError("window width epsilon*n is below one level");
  if (!curve.complete()) throw ConfigError("window schedule needs a complete barrier curve");
  const double scale = std::cbrt(static_cast<double>(n));
  WindowSchedule out{std::vector<double>(static_cast<std::size_t>(n) + 1), l2 * scale};
  const auto lower_of = [&](int k) { return (curve.s[k] - curve.delta) * scale; };
  for (int j = 0; j <= n; ++j) {
    const long long scaled = static_cast<long long>(j) * k_max;
    const int raw = static_cast<int>(scaled / n);
    const int k = std::min(raw, k_max - 1);
    double lower = lower_of(k);
    if (raw >= 1 && scaled % n == 0) lower = std::max(lower, lower_of(raw - 1));
    out.lower[j] = lower;
  }
  return out;
}

CountResult count_in_windows(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                             const WindowSchedule& windows, std::uint64_t pop_budget) {
  if (windows.lower.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("window schedule length must be n + 1");
  const double upper = windows.upper;
  const double* lower = windows.lower.data();
  return sweep_levels(dist_centered, rand, n, pop_budget,
                      [upper, lower](int level, double s) { return s > lower[level] && s < upper; });
}

CountResult count_windowed(const StepDistribution& dist_centered, const TreeRandomness& rand, int n,
                           const BarrierCurve& curve, double l2, std::uint64_t pop_budget) {
  return count_in_windows(dist_centered, rand, n, window_schedule(curve, l2, n), pop_budget);
}

ExtremesSummary mc_extremes(const StepDistribution& dist, int b, std::span<const std::uint64_t> seeds, int n,
                            std::uint64_t node_budget) {
  if (seeds.empty()) throw std::invalid_argument("mc_extremes needs at least one seed");
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  if (!dist.bounded() && n > 14) throw Unsupported("extremes of unbounded laws are enumerated only for n <= 14");

  ExtremesSummary out{n, {}, 0, 0, 0, 0};
  std::vector<double> mins, maxs;
  for (std::uint64_t seed : seeds) {
    const TreeRandomness rand(seed, b);
    const LeafSearch lo = min_leaf(dist, rand, n, 1.0, dist.support_min(), node_budget);
    const LeafSearch hi = min_leaf(dist, rand, n, -1.0, -dist.support_max(), node_budget);
    out.trials.push_back({seed, lo.best, -hi.best, lo.exhausted || hi.exhausted});
    mins.push_back(lo.best / std::max(n, 1));
    maxs.push_back(-hi.best / std::max(n, 1));
  }
  out.mean_min_over_n = mean(mins);
  out.median_min_over_n = median(mins);
  out.mean_max_over_n = mean(maxs);
  out.median_max_over_n = median(maxs);
  return out;
}

}  // namespace brwlab
