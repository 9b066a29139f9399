#pragma once

#include <optional>
#include <vector>

#include "brwlab/ldtool.hpp"

namespace brwlab {

/// Euler sequence for the optimal barrier: s_0 = 0, w_0 = l + δ and
///   s_k = s_{k-1} − π²σ_Q² / (2λ₋ w_{k-1}²) · ε,   w_k = l + δ − s_k.
/// ε = 1 / inv_epsilon; the step count is kept as an integer.
struct BarrierCurve {
  double l;
  double delta;
  int inv_epsilon;
  std::vector<double> s;
  std::vector<double> w;
  double sigma_q_sq;
  double lambda_minus;

  // Full length when the recursion completed all inv_epsilon steps.
  bool complete() const noexcept { return static_cast<int>(s.size()) == inv_epsilon + 1; }
};

/// Outcome of the recursion. When w_k ≤ 0 the recursion stops at k (the curve
/// reached its ceiling l + δ, the sub-critical regime) and `blowup_step` holds
/// k; `curve` then carries s_0..s_k.
struct EulerOutcome {
  BarrierCurve curve;
  std::optional<int> blowup_step;

  bool ok() const noexcept { return !blowup_step.has_value(); }
};

EulerOutcome euler_curve(const LDProfile& profile, double l, double delta, int inv_epsilon);
EulerOutcome euler_curve(double sigma_q_sq, double lambda_minus, double l, double delta, int inv_epsilon);

// s^α(t) = α + ∛(l0³ t − α³) with l0³ = −3π²σ_Q²/(2λ₋), real cube root.
double closed_form_s(double alpha, double sigma_q_sq, double lambda_minus, double t);

struct Crossing {
  std::optional<int> k;  // smallest k with s_k ≥ l1, empty if never reached
  double gamma_slack;    // 1 − K·ε; NaN when not crossed
};

Crossing first_crossing_K(const BarrierCurve& curve, double l1);

struct VariationalSolution {
  double value;
  std::vector<double> w_star;  // piecewise-constant value on each of grid_size cells
  double certified_gain;       // best improvement found by the local search (≤ 1e-6 when optimal)
};

// Discrete objective for piecewise-constant w on equal cells:
//   max_j ( w_j + Σ_{i≤j} c·h / w_i² ),  h = 1 / cells.
double variational_objective(double c, const std::vector<double>& w);

// Piecewise-constant w on `cells` cells that makes every cell's objective
// term equal, at the smallest value for which that is possible.
std::vector<double> equalized_optimum(double c, int cells);

// min over w > 0 of max_t { w(t) + ∫_0^t c / w(u)² du }, solved on `grid_size`
// cells by equalising the objective on every cell, then certified by a
// coordinate perturbation search.
VariationalSolution solve_variational(double c, int grid_size);

}  // namespace brwlab
