#include "brwlab/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "brwlab/errors.hpp"

namespace brwlab {

namespace {

constexpr double kProbTolerance = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::vector<Atom> atoms_of(const StepDistribution::Kind& kind) {
  std::vector<Atom> out;
  if (const auto* tp = std::get_if<TwoPoint>(&kind)) {
    out = {{tp->a, tp->p}, {tp->b, 1.0 - tp->p}};
  } else if (const auto* fd = std::get_if<FiniteDiscrete>(&kind)) {
    for (const Atom& a : fd->atoms)
      if (a.prob > 0.0) out.push_back(a);
  }
  return out;
}

// Weights of the law tilted by lambda, normalised, together with the
// log-sum-exp pieces: log Σ p_i e^{λ v_i} = top + log(norm).
struct Tilted {
  std::vector<double> weights;
  double top;
  double norm;
};

Tilted tilted_weights(std::span<const Atom> atoms, double lambda) {
  Tilted t{std::vector<double>(atoms.size()), -std::numeric_limits<double>::infinity(), 0.0};
  for (const Atom& a : atoms) t.top = std::max(t.top, lambda * a.value);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    t.weights[i] = atoms[i].prob * std::exp(lambda * atoms[i].value - t.top);
    t.norm += t.weights[i];
  }
  for (double& w : t.weights) w /= t.norm;
  return t;
}

double parse_real(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last)
    throw ConfigError("malformed number '" + std::string(text) + "' in " + std::string(what));
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

StepDistribution::StepDistribution(Kind kind, double shift)
    : kind_(std::move(kind)), shift_(shift), atoms_(atoms_of(kind_)) {
  cumulative_.reserve(atoms_.size());
  double acc = 0.0;
  for (const Atom& a : atoms_) cumulative_.push_back(acc += a.prob);
}

StepDistribution StepDistribution::gaussian(double mean, double variance) {
  require(std::isfinite(mean), "gaussian mean must be finite");
  require(std::isfinite(variance) && variance > 0.0, "gaussian variance must be positive");
  return StepDistribution(Gaussian{mean, variance}, 0.0);
}

StepDistribution StepDistribution::two_point(double a, double b, double p) {
  require(std::isfinite(a) && std::isfinite(b), "twopoint values must be finite");
  require(a != b, "twopoint values must differ");
  require(p > 0.0 && p < 1.0, "twopoint probability must lie in (0, 1)");
  return StepDistribution(TwoPoint{a, b, p}, 0.0);
}

StepDistribution StepDistribution::discrete(std::vector<Atom> atoms) {
  double total = 0.0;
  for (const Atom& a : atoms) {
    require(std::isfinite(a.value), "discrete atom values must be finite");
    require(std::isfinite(a.prob) && a.prob >= 0.0, "discrete probabilities must be non-negative");
    total += a.prob;
  }
  require(std::abs(total - 1.0) <= kProbTolerance, "discrete probabilities must sum to 1");
  std::vector<double> support;
  for (const Atom& a : atoms)
    if (a.prob > 0.0) support.push_back(a.value);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  require(support.size() >= 2, "discrete law needs at least two distinct atoms with positive probability");
  return StepDistribution(FiniteDiscrete{std::move(atoms)}, 0.0);
}

double StepDistribution::support_min() const noexcept {
  if (is_gaussian()) return -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms_) lo = std::min(lo, a.value);
  return lo + shift_;
}

double StepDistribution::support_max() const noexcept {
  if (is_gaussian()) return std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms_) hi = std::max(hi, a.value);
  return hi + shift_;
}

StepDistribution StepDistribution::with_shift(double shift) const {
  StepDistribution out = *this;
  out.shift_ = shift;
  return out;
}

double log_mgf(const StepDistribution& dist, double lambda) {
  if (lambda == 0.0) return 0.0;
  if (const auto* g = std::get_if<Gaussian>(&dist.kind()))
    return (g->mean + dist.shift()) * lambda + 0.5 * g->variance * lambda * lambda;
  const auto atoms = dist.atoms();
  double top = -std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms) top = std::max(top, lambda * a.value);
  double sum = 0.0;
  for (const Atom& a : atoms) sum += a.prob * std::exp(lambda * a.value - top);
  return top + std::log(sum) + dist.shift() * lambda;
}

LogMgfDerivs log_mgf_derivs(const StepDistribution& dist, double lambda) {
  if (const auto* g = std::get_if<Gaussian>(&dist.kind())) {
    const double mu = g->mean + dist.shift();
    return {mu * lambda + 0.5 * g->variance * lambda * lambda, mu + g->variance * lambda, g->variance};
  }
  const auto atoms = dist.atoms();
  const Tilted t = tilted_weights(atoms, lambda);
  double mean = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) mean += t.weights[i] * atoms[i].value;
  double var = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double d = atoms[i].value - mean;
    var += t.weights[i] * d * d;
  }
  const double value = lambda == 0.0 ? 0.0 : t.top + std::log(t.norm) + dist.shift() * lambda;
  return {value, mean + dist.shift(), var};
}

double legendre_gap(const StepDistribution& dist, double lambda) {
  if (const auto* g = std::get_if<Gaussian>(&dist.kind())) return 0.5 * g->variance * lambda * lambda;
  const auto atoms = dist.atoms();
  const Tilted t = tilted_weights(atoms, lambda);
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (t.weights[i] > 0.0) acc += t.weights[i] * (lambda * atoms[i].value - t.top);
  return acc - std::log(t.norm);
}

StepDistribution tilt(const StepDistribution& dist, double lambda) {
  if (lambda == 0.0) return dist;
  if (const auto* g = std::get_if<Gaussian>(&dist.kind()))
    return StepDistribution::gaussian(g->mean + lambda * g->variance, g->variance).with_shift(dist.shift());
  const auto atoms = dist.atoms();
  const Tilted t = tilted_weights(atoms, lambda);
  if (const auto* tp = std::get_if<TwoPoint>(&dist.kind()))
    return StepDistribution::two_point(tp->a, tp->b, t.weights[0]).with_shift(dist.shift());
  std::vector<Atom> out(atoms.begin(), atoms.end());
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) total += (out[i].prob = t.weights[i]);
  for (Atom& a : out) a.prob /= total;
  return StepDistribution::discrete(std::move(out)).with_shift(dist.shift());
}

StepDistribution center(const StepDistribution& dist, double m) { return dist.with_shift(dist.shift() - m); }

double sample(const StepDistribution& dist, double uniform) {
  if (const auto* g = std::get_if<Gaussian>(&dist.kind()))
    return g->mean + dist.shift() + std::sqrt(g->variance) * inverse_normal_cdf(uniform);
  const auto& cum = dist.cumulative_;
  auto it = std::upper_bound(cum.begin(), cum.end(), uniform);
  std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  if (idx >= cum.size()) idx = cum.size() - 1;
  return dist.atoms_[idx].value + dist.shift();
}

double inverse_normal_cdf(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r +
             4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r +
             2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
               1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
               1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
               2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
               7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

StepDistribution parse_distribution(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError("distribution spec '" + std::string(text) + "' lacks a '<kind>:' prefix");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = text.substr(colon + 1);
  if (kind == "gaussian") {
    const auto parts = split(body, ',');
    if (parts.size() != 2) throw ConfigError("gaussian expects <mean>,<var>");
    return StepDistribution::gaussian(parse_real(parts[0], "gaussian"), parse_real(parts[1], "gaussian"));
  }
  if (kind == "twopoint") {
    const auto parts = split(body, ',');
    if (parts.size() != 3) throw ConfigError("twopoint expects <a>,<b>,<p>");
    return StepDistribution::two_point(parse_real(parts[0], "twopoint"), parse_real(parts[1], "twopoint"),
                                       parse_real(parts[2], "twopoint"));
  }
  if (kind == "discrete") {
    std::vector<Atom> atoms;
    for (std::string_view item : split(body, ';')) {
      if (item.empty()) continue;  // tolerate a trailing ';'
      const auto pair = split(item, ':');
      if (pair.size() != 2) throw ConfigError("discrete atoms are written <value>:<prob>");
      atoms.push_back({parse_real(pair[0], "discrete"), parse_real(pair[1], "discrete")});
    }
    return StepDistribution::discrete(std::move(atoms));
  }
  throw ConfigError("unknown distribution kind '" + std::string(kind) + "'");
}

std::string format_distribution(const StepDistribution& dist) {
  std::string out;
  if (const auto* g = std::get_if<Gaussian>(&dist.kind())) {
    out = "gaussian:" + fmt(g->mean) + "," + fmt(g->variance);
  } else if (const auto* tp = std::get_if<TwoPoint>(&dist.kind())) {
    out = "twopoint:" + fmt(tp->a) + "," + fmt(tp->b) + "," + fmt(tp->p);
  } else {
    out = "discrete:";
    const auto& atoms = std::get<FiniteDiscrete>(dist.kind()).atoms;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      out += (i ? ";" : "") + fmt(atoms[i].value) + ":" + fmt(atoms[i].prob);
  }
  return out;
}

}  // namespace brwlab
