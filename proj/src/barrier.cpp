#include "brwlab/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace brwlab {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

// Larger root of w + a / w² = rhs, which exists iff rhs ≥ 1.5 (2a)^{1/3}.
std::optional<double> upper_root(double a, double rhs) {
  const double w_min = std::cbrt(2.0 * a);
  if (w_min + a / (w_min * w_min) > rhs) return std::nullopt;
  double lo = w_min;
  double hi = rhs;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + a / (mid * mid) > rhs ? hi : lo) = mid;
  }
  return lo;
}

}  // namespace

EulerOutcome euler_curve(double sigma_q_sq, double lambda_minus, double l, double delta, int inv_epsilon) {
  if (!(l > 0.0) || !(delta > 0.0) || inv_epsilon < 1)
    throw std::invalid_argument("euler_curve needs l > 0, delta > 0 and inv_epsilon >= 1");
  if (!(sigma_q_sq > 0.0) || !(lambda_minus < 0.0))
    throw std::invalid_argument("euler_curve needs sigma_q_sq > 0 and lambda_minus < 0");
  EulerOutcome out{BarrierCurve{l, delta, inv_epsilon, {0.0}, {l + delta}, sigma_q_sq, lambda_minus}, std::nullopt};
  auto& s = out.curve.s;
  auto& w = out.curve.w;
  s.reserve(inv_epsilon + 1);
  w.reserve(inv_epsilon + 1);
  const double rate = kPi2 * sigma_q_sq / (2.0 * lambda_minus);
  for (int k = 1; k <= inv_epsilon; ++k) {
    const double prev = w.back();
    s.push_back(s.back() - rate / (prev * prev) / inv_epsilon);
    w.push_back(l + delta - s.back());
    if (w.back() <= 0.0) {
      out.blowup_step = k;
      break;
    }
  }
  return out;
}

EulerOutcome euler_curve(const LDProfile& profile, double l, double delta, int inv_epsilon) {
  return euler_curve(profile.sigma_q_sq, profile.lambda_minus, l, delta, inv_epsilon);
}

double closed_form_s(double alpha, double sigma_q_sq, double lambda_minus, double t) {
  const double l0_cubed = -3.0 * kPi2 * sigma_q_sq / (2.0 * lambda_minus);
  return alpha + std::cbrt(l0_cubed * t - alpha * alpha * alpha);
}

Crossing first_crossing_K(const BarrierCurve& curve, double l1) {
  for (std::size_t k = 0; k < curve.s.size(); ++k) {
    if (curve.s[k] >= l1) {
      const int kk = static_cast<int>(k);
      return {kk, 1.0 - static_cast<double>(kk) / curve.inv_epsilon};
    }
  }
  return {std::nullopt, std::numeric_limits<double>::quiet_NaN()};
}

double variational_objective(double c, const std::vector<double>& w) {
  const double a = c / static_cast<double>(w.size());
  double integral = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double wj : w) {
    integral += a / (wj * wj);
    best = std::max(best, wj + integral);
  }
  return best;
}

std::vector<double> equalized_profile(double c, int cells, double value) {
  const double a = c / cells;
  std::vector<double> w;
  w.reserve(cells);
  double rhs = value;
  for (int j = 0; j < cells; ++j) {
    const auto root = upper_root(a, rhs);
    if (!root) return {};
    w.push_back(*root);
    rhs -= a / (*root * *root);
  }
  return w;
}

std::vector<double> equalized_optimum(double c, int cells) {
  if (!(c > 0.0) || cells < 1) throw std::invalid_argument("equalized_optimum needs c > 0 and cells >= 1");
  double lo = 0.0;
  double hi = 2.0 * std::cbrt(3.0 * c) + 1.0;
  while (equalized_profile(c, cells, hi).empty()) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (equalized_profile(c, cells, mid).empty() ? lo : hi) = mid;
  }
  return equalized_profile(c, cells, hi);
}

VariationalSolution solve_variational(double c, int grid_size) {
  if (grid_size < 10) throw std::invalid_argument("solve_variational needs grid_size >= 10");
  std::vector<double> w = equalized_optimum(c, grid_size);
  const double start = variational_objective(c, w);
  double value = start;

  constexpr double kSteps[] = {1e-2, -1e-2, 1e-3, -1e-3, 1e-4, -1e-4, 1e-6, -1e-6};
  for (int sweep = 0; sweep < 8; ++sweep) {
    bool improved = false;
    for (std::size_t j = 0; j < w.size(); ++j) {
      for (double step : kSteps) {
        const double keep = w[j];
        w[j] = keep * (1.0 + step);
        const double trial = variational_objective(c, w);
        if (trial < value - 1e-6) {
          value = trial;
          improved = true;
        } else {
          w[j] = keep;
        }
      }
    }
    if (!improved) break;
  }
  return {value, std::move(w), start - value};
}

}  // namespace brwlab
