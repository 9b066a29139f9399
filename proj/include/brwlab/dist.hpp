#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace brwlab {

struct Gaussian {
  double mean;
  double variance;
};

// Value `a` with probability `p`, value `b` otherwise.
struct TwoPoint {
  double a;
  double b;
  double p;
};

struct Atom {
  double value;
  double prob;
};

struct FiniteDiscrete {
  std::vector<Atom> atoms;
};

struct LogMgfDerivs {
  double value;   // Λ(λ)
  double first;   // Λ'(λ), mean of the tilted law
  double second;  // Λ''(λ), variance of the tilted law
};

/// Increment law of the walk. Immutable once built; every sample receives the
/// additive `shift()`, which is how centering is represented.
class StepDistribution {
 public:
  using Kind = std::variant<Gaussian, TwoPoint, FiniteDiscrete>;

  static StepDistribution gaussian(double mean, double variance);
  static StepDistribution two_point(double a, double b, double p);
  static StepDistribution discrete(std::vector<Atom> atoms);

  const Kind& kind() const noexcept { return kind_; }
  double shift() const noexcept { return shift_; }
  bool is_gaussian() const noexcept { return std::holds_alternative<Gaussian>(kind_); }

  // Unshifted atoms in declaration order; empty for the Gaussian kind.
  std::span<const Atom> atoms() const noexcept { return atoms_; }

  // Shifted support bounds (±inf for the Gaussian kind).
  double support_min() const noexcept;
  double support_max() const noexcept;
  bool bounded() const noexcept { return !is_gaussian(); }

  StepDistribution with_shift(double shift) const;

 private:
  StepDistribution(Kind kind, double shift);

  Kind kind_;
  double shift_ = 0.0;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;

  friend double sample(const StepDistribution&, double);
};

double log_mgf(const StepDistribution& dist, double lambda);
LogMgfDerivs log_mgf_derivs(const StepDistribution& dist, double lambda);

// λΛ'(λ) − Λ(λ), evaluated without cancellation. It is shift-invariant and,
// for discrete laws, equals the relative entropy of the tilted law.
double legendre_gap(const StepDistribution& dist, double lambda);

StepDistribution tilt(const StepDistribution& dist, double lambda);
StepDistribution center(const StepDistribution& dist, double m);

// Inverse-transform sample from a uniform in [0, 1).
double sample(const StepDistribution& dist, double uniform);

// Wichura's AS241 (PPND16) rational approximation of the standard normal
// quantile; relative accuracy about 1e-16.
double inverse_normal_cdf(double p);

// `gaussian:<mean>,<var>`, `twopoint:<a>,<b>,<p>`, `discrete:<v1>:<p1>;<v2>:<p2>;...`
// Throws ConfigError on malformed text or invalid parameters.
StepDistribution parse_distribution(std::string_view text);
std::string format_distribution(const StepDistribution& dist);

}  // namespace brwlab
