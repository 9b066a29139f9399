#pragma once

#include "brwlab/dist.hpp"

namespace brwlab {

enum class LambdaSign { negative, positive };

/// Large-deviation constants of a (step law, branching factor) pair.
///
/// `m` and `M` are the linear speeds of the minimum and maximum,
/// Λ'(λ₋) and Λ'(λ₊) of the original law. `centered_dist` subtracts `m` from
/// every increment; `sigma_q_sq` is the variance of the centered law tilted by
/// λ₋ and `l0` = ∛(3π²σ_Q² / (−2λ₋)) is the limit of L_n / n^{1/3}.
struct LDProfile {
  double log_b;
  double lambda_minus;
  double lambda_plus;
  double m;
  double M;
  double sigma_q_sq;
  double l0;
  StepDistribution centered_dist;
};

// Λ*(x) = sup_λ (λx − Λ(λ)); +inf when x lies outside the closed support hull.
double rate_function(const StepDistribution& dist, double x);

// Root of λΛ'(λ) − Λ(λ) = log b on the requested side of zero.
// Throws AssumptionViolated when no finite root exists.
double solve_lambda(const StepDistribution& dist, double log_b, LambdaSign sign);

LDProfile ld_profile(const StepDistribution& dist, int b);

// ∛(3π²σ² / (−2λ₋)).
double theorem_constant(double sigma_q_sq, double lambda_minus);

}  // namespace brwlab
