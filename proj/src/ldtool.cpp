#include "brwlab/ldtool.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "brwlab/errors.hpp"

namespace brwlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaCap = 1e6;

// Total probability carried by the atoms sitting exactly at `value` (shifted).
double mass_at(const StepDistribution& dist, double value) {
  double mass = 0.0;
  for (const Atom& a : dist.atoms())
    if (a.value + dist.shift() == value) mass += a.prob;
  return mass;
}

}  // namespace

double rate_function(const StepDistribution& dist, double x) {
  const double mean = log_mgf_derivs(dist, 0.0).first;
  if (x == mean) return 0.0;
  if (dist.bounded()) {
    const double lo = dist.support_min();
    const double hi = dist.support_max();
    if (x < lo || x > hi) return kInf;
    if (x == lo || x == hi) return -std::log(mass_at(dist, x));
  }

  // Λ' is increasing, so bracket the root of Λ'(λ) = x on the side of the mean.
  const double dir = x > mean ? 1.0 : -1.0;
  double inner = 0.0;
  double outer = dir;
  while ((log_mgf_derivs(dist, outer).first - x) * dir < 0.0) {
    inner = outer;
    outer *= 2.0;
    if (std::abs(outer) > kLambdaCap) return kInf;
  }
  double lo = std::min(inner, outer);
  double hi = std::max(inner, outer);

  double lambda = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const LogMgfDerivs d = log_mgf_derivs(dist, lambda);
    const double resid = d.first - x;
    if (resid == 0.0) break;
    (resid < 0.0 ? lo : hi) = lambda;
    double next = lambda - resid / d.second;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lambda || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(lambda)) break;
    lambda = next;
  }
  return lambda * x - log_mgf(dist, lambda);
}

double solve_lambda(const StepDistribution& dist, double log_b, LambdaSign sign) {
  if (!(log_b > 0.0)) throw AssumptionViolated("log b must be positive");
  const double dir = sign == LambdaSign::negative ? -1.0 : 1.0;
  const char* side = sign == LambdaSign::negative ? "lambda_minus" : "lambda_plus";

  // For a bounded law the gap tends to −log P(X = extreme atom) as |λ| → ∞ and
  // never reaches it, so the equation is solvable iff that limit exceeds log b.
  if (dist.bounded()) {
    const double extreme = sign == LambdaSign::negative ? dist.support_min() : dist.support_max();
    const double limit = -std::log(mass_at(dist, extreme));
    if (limit <= log_b * (1.0 + 1e-12))
      throw AssumptionViolated(std::string("no interior solution for ") + side +
                               ": lambda*Lambda'(lambda)-Lambda(lambda) stays below log b");
  }

  const auto residual = [&](double lambda) { return legendre_gap(dist, lambda) - log_b; };

  double inner = 0.0;
  double outer = dir;
  while (residual(outer) <= 0.0) {
    inner = outer;
    outer *= 2.0;
    if (std::abs(outer) > kLambdaCap)
      throw AssumptionViolated(std::string("bracketing for ") + side + " left the region of finiteness");
  }

  // |λ| ↦ residual is increasing: `inner` has residual ≤ 0, `outer` > 0.
  while (std::abs(outer - inner) > 1e-12 * std::max(std::abs(inner), std::abs(outer))) {
    const double mid = 0.5 * (inner + outer);
    (residual(mid) <= 0.0 ? inner : outer) = mid;
  }

  const double lo = std::min(inner, outer);
  const double hi = std::max(inner, outer);
  double lambda = 0.5 * (inner + outer);
  for (int polish = 0; polish < 2; ++polish) {
    const double slope = lambda * log_mgf_derivs(dist, lambda).second;
    if (slope == 0.0) break;
    const double next = lambda - residual(lambda) / slope;
    if (next < lo || next > hi) break;
    lambda = next;
  }
  return lambda;
}

double theorem_constant(double sigma_q_sq, double lambda_minus) {
  return std::cbrt(3.0 * std::numbers::pi * std::numbers::pi * sigma_q_sq / (-2.0 * lambda_minus));
}

LDProfile ld_profile(const StepDistribution& dist, int b) {
  if (b < 2) throw AssumptionViolated("branching factor b must be at least 2");
  const double log_b = std::log(static_cast<double>(b));
  const double lambda_minus = solve_lambda(dist, log_b, LambdaSign::negative);
  const double lambda_plus = solve_lambda(dist, log_b, LambdaSign::positive);
  const double m = log_mgf_derivs(dist, lambda_minus).first;
  const double M = log_mgf_derivs(dist, lambda_plus).first;
  StepDistribution centered = center(dist, m);
  const double sigma_q_sq = log_mgf_derivs(centered, lambda_minus).second;
  return LDProfile{log_b,      lambda_minus, lambda_plus, m, M, sigma_q_sq,
                   theorem_constant(sigma_q_sq, lambda_minus), std::move(centered)};
}

}  // namespace brwlab
