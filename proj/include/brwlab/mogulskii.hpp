#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "brwlab/dist.hpp"

namespace brwlab {

/// Piecewise-constant open tube on [0, 1]. Piece j covers
/// [breakpoints[j], breakpoints[j+1]) (the last piece also covers t = 1) and
/// admits lower[j] < x < upper[j]; bounds may be infinite.
class TubeRegion {
 public:
  TubeRegion(std::vector<double> breakpoints, std::vector<double> lower, std::vector<double> upper);

  static TubeRegion constant(double lower, double upper);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  std::size_t pieces() const noexcept { return lower_.size(); }

  // Right-continuous piece lookup; t = 1 maps to the last piece.
  std::size_t piece_at(double t) const noexcept;

  TubeRegion shifted(double x) const;  // {(f1 − x, f2 − x)}

 private:
  std::vector<double> breakpoints_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Union of the tube shifted by a and by b (a ≤ b): {(f1 − b, f2 − a)}.
TubeRegion union_of_shifts(const TubeRegion& tube, double a, double b);

// ∫_0^1 dt / (f2 − f1)², infinite pieces contributing 0.
double h2(const TubeRegion& tube);

// ∫_0^1 dt / (f2 − f1 + gap)².
double h2_widened(const TubeRegion& tube, double gap);

struct StayEstimate {
  double p_hat;
  double std_err;
  double rate_hat;  // −log(p_hat) / n^{1/3}; NaN when zero_hits
  bool zero_hits;
  std::uint64_t samples;
};

// Plain Monte Carlo estimate of Q(start + S_n(t) ∈ G for all t), checking
// k = 0..n−1 at t = k/n. Sample i draws its k-th step from the uniform
// to_unit(mix64(mix64(seed ^ mix64(i)) + k)), so the estimate does not depend
// on `workers`.
StayEstimate estimate_stay_prob(const StepDistribution& q_dist, const TubeRegion& tube, int n,
                                std::uint64_t samples, std::uint64_t seed, double start = 0.0, int workers = 1);

// `t0:f1:f2;t1:f1:f2;...` with t0 = 0 and `inf`/`-inf` for unbounded sides.
TubeRegion parse_tube(std::string_view text);

}  // namespace brwlab
