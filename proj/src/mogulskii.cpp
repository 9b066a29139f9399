#include "brwlab/mogulskii.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "brwlab/errors.hpp"
#include "brwlab/mix.hpp"

namespace brwlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_bound(std::string_view text) {
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("malformed tube value '" + std::string(text) + "'");
  return v;
}

}  // namespace

TubeRegion::TubeRegion(std::vector<double> breakpoints, std::vector<double> lower, std::vector<double> upper)
    : breakpoints_(std::move(breakpoints)), lower_(std::move(lower)), upper_(std::move(upper)) {
  const std::size_t j = lower_.size();
  if (j == 0 || upper_.size() != j || breakpoints_.size() != j + 1)
    throw ConfigError("tube needs J pieces with J + 1 breakpoints");
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
    throw ConfigError("tube breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i < j; ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) throw ConfigError("tube breakpoints must be strictly increasing");
    if (!(lower_[i] < upper_[i])) throw ConfigError("tube lower bound must be below upper bound on every piece");
  }
  for (std::size_t i = 0; i + 1 < j; ++i)
    if (!(std::max(lower_[i], lower_[i + 1]) < std::min(upper_[i], upper_[i + 1])))
      throw ConfigError("consecutive tube pieces must overlap");
}

TubeRegion TubeRegion::constant(double lower, double upper) { return TubeRegion({0.0, 1.0}, {lower}, {upper}); }

std::size_t TubeRegion::piece_at(double t) const noexcept {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  return std::min(idx == 0 ? 0 : idx - 1, lower_.size() - 1);
}

TubeRegion TubeRegion::shifted(double x) const {
  std::vector<double> lo = lower_, hi = upper_;
  for (double& v : lo) v -= x;
  for (double& v : hi) v -= x;
  return TubeRegion(breakpoints_, std::move(lo), std::move(hi));
}

TubeRegion union_of_shifts(const TubeRegion& tube, double a, double b) {
  if (a > b) std::swap(a, b);
  std::vector<double> lo = tube.lower(), hi = tube.upper();
  for (double& v : lo) v -= b;
  for (double& v : hi) v -= a;
  return TubeRegion(tube.breakpoints(), std::move(lo), std::move(hi));
}

double h2_widened(const TubeRegion& tube, double gap) {
  if (gap < 0.0) throw std::invalid_argument("gap must be non-negative");
  double acc = 0.0;
  const auto& t = tube.breakpoints();
  for (std::size_t j = 0; j < tube.pieces(); ++j) {
    const double width = tube.upper()[j] - tube.lower()[j] + gap;
    if (std::isinf(width)) continue;
    acc += (t[j + 1] - t[j]) / (width * width);
  }
  return acc;
}

double h2(const TubeRegion& tube) { return h2_widened(tube, 0.0); }

StayEstimate estimate_stay_prob(const StepDistribution& q_dist, const TubeRegion& tube, int n,
                                std::uint64_t samples, std::uint64_t seed, double start, int workers) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  workers = std::max(workers, 1);

  // Per-level bounds in walk units, so the inner loop is two comparisons.
  const double scale = std::cbrt(static_cast<double>(n));
  std::vector<double> lo(n), hi(n);
  for (int k = 0; k < n; ++k) {
    const std::size_t j = tube.piece_at(static_cast<double>(k) / n);
    lo[k] = tube.lower()[j];
    hi[k] = tube.upper()[j];
  }

  const auto survives = [&](std::uint64_t i) {
    const std::uint64_t stream = mix64(seed ^ mix64(i));
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k > 0) sum += sample(q_dist, to_unit(mix64(stream + static_cast<std::uint64_t>(k))));
      const double x = start + sum / scale;
      if (!(x > lo[k] && x < hi[k])) return false;
    }
    return true;
  };

  std::atomic<std::uint64_t> hits{0};
  const auto run = [&](int worker) {
    std::uint64_t local = 0;
    for (std::uint64_t i = worker; i < samples; i += workers) local += survives(i) ? 1 : 0;
    hits += local;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  const double p = static_cast<double>(hits.load()) / static_cast<double>(samples);
  StayEstimate out{p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), 0.0, hits.load() == 0, samples};
  out.rate_hat = out.zero_hits ? std::numeric_limits<double>::quiet_NaN() : -std::log(p) / scale;
  return out;
}

TubeRegion parse_tube(std::string_view text) {
  std::vector<double> t, lo, hi;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    const std::string_view item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    const std::size_t c1 = item.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw ConfigError("tube pieces are written <t>:<f1>:<f2>");
    t.push_back(parse_bound(item.substr(0, c1)));
    lo.push_back(parse_bound(item.substr(c1 + 1, c2 - c1 - 1)));
    hi.push_back(parse_bound(item.substr(c2 + 1)));
  }
  t.push_back(1.0);
  return TubeRegion(std::move(t), std::move(lo), std::move(hi));
}

}  // namespace brwlab
