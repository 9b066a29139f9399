#include "brwlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "brwlab/brw.hpp"
#include "brwlab/errors.hpp"
#include "brwlab/mix.hpp"
#include "brwlab/stats.hpp"

namespace brwlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

template <typename Int>
Int parse_int(std::string_view text, int line, const std::string& key) {
  text = trim(text);
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects an integer, got '" +
                          std::string(text) + "'",
                      line, key);
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

[[noreturn]] void bad(int line, const std::string& key, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": '" + key + "' " + what, line, key);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

// Run `task(i)` for i in [0, count) on `workers` threads.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task task) {
  std::atomic<std::size_t> next{0};
  const auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) task(i);
  };
  if (workers <= 1) {
    drain();
    return;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  int line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) bad(line_no, key, "is given more than once");
    if (value.empty()) bad(line_no, key, "has an empty value");

    if (key == "dist") {
      try {
        parse_distribution(value);
      } catch (const ConfigError& e) {
        bad(line_no, key, std::string("is invalid: ") + e.what());
      }
      cfg.dist_spec = std::string(value);
    } else if (key == "b") {
      cfg.b = parse_int<int>(value, line_no, key);
      if (cfg.b < 2) bad(line_no, key, "must be at least 2");
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      for (std::string_view item : split(value, ',')) {
        const int n = parse_int<int>(item, line_no, key);
        if (n < 1) bad(line_no, key, "entries must be at least 1");
        if (!cfg.n_grid.empty() && n <= cfg.n_grid.back()) bad(line_no, key, "must be strictly increasing");
        cfg.n_grid.push_back(n);
      }
    } else if (key == "trials_per_n") {
      cfg.trials_per_n = parse_int<int>(value, line_no, key);
      if (cfg.trials_per_n < 1) bad(line_no, key, "must be at least 1");
    } else if (key == "base_seed") {
      cfg.base_seed = parse_int<std::uint64_t>(value, line_no, key);
    } else if (key == "node_budget") {
      cfg.node_budget = parse_int<std::uint64_t>(value, line_no, key);
      if (cfg.node_budget < 1) bad(line_no, key, "must be at least 1");
    } else if (key == "output_path") {
      cfg.output_path = std::string(value);
    } else if (key == "workers") {
      cfg.workers = parse_int<int>(value, line_no, key);
      if (cfg.workers < 1) bad(line_no, key, "must be at least 1");
    } else {
      bad(line_no, key, "is not a known key");
    }
  }
  for (const char* required : {"dist", "b", "n_grid", "trials_per_n"})
    if (!seen.contains(required))
      throw ConfigError(std::string("missing required key '") + required + "'", 0, required);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::uint64_t trial_seed(std::uint64_t base_seed, int n, int trial) {
  return mix3(base_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
}

OffsetSummary summarize(const std::vector<TrialRow>& rows, double l0_reference) {
  std::map<int, std::vector<const TrialRow*>> by_n;
  for (const TrialRow& r : rows) by_n[r.n].push_back(&r);

  OffsetSummary out{{}, 0.0, 0.0, l0_reference};
  std::vector<double> log_n, log_median;
  for (auto& [n, group] : by_n) {
    std::sort(group.begin(), group.end(), [](const TrialRow* a, const TrialRow* b) { return a->trial < b->trial; });
    std::vector<double> scaled, raw, lower;
    int exhausted = 0;
    for (const TrialRow* r : group) {
      scaled.push_back(r->l_n_over_cbrt_n);
      lower.push_back(r->lower_bound / std::cbrt(static_cast<double>(n)));
      raw.push_back(r->l_n);
      exhausted += r->budget_exhausted ? 1 : 0;
    }
    out.levels.push_back({n, static_cast<int>(group.size()), median(scaled), mean(scaled), quantile(scaled, 0.25),
                          quantile(scaled, 0.75), static_cast<double>(exhausted) / static_cast<double>(group.size()),
                          median(lower)});
    const double med = median(raw);
    if (med > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_median.push_back(std::log(med));
    }
  }
  const LineFit fit = least_squares(log_n, log_median);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  return out;
}

StudyResult run_convergence_study(const ExperimentConfig& config) {
  const StepDistribution dist = parse_distribution(config.dist_spec);
  LDProfile profile = ld_profile(dist, config.b);

  struct Task {
    int n;
    int trial;
  };
  std::vector<Task> tasks;
  for (int n : config.n_grid)
    for (int t = 0; t < config.trials_per_n; ++t) tasks.push_back({n, t});

  std::set<std::uint64_t> seeds;
  for (const Task& t : tasks)
    if (!seeds.insert(trial_seed(config.base_seed, t.n, t.trial)).second)
      throw ConfigError("trial seed collision; choose another base_seed");

  std::vector<TrialRow> rows(tasks.size());
  parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
    const Task t = tasks[i];
    const std::uint64_t seed = trial_seed(config.base_seed, t.n, t.trial);
    const OffsetResult r = exact_offset(profile.centered_dist, TreeRandomness(seed, config.b), t.n, config.node_budget);
    rows[i] = {t.n, t.trial, seed, r.l_n, r.l_n / std::cbrt(static_cast<double>(t.n)), r.nodes_explored,
               r.budget_exhausted, r.lower_bound};
  });

  OffsetSummary summary = summarize(rows, profile.l0);
  if (!config.output_path.empty()) {
    const std::filesystem::path dir(config.output_path);
    std::filesystem::create_directories(dir);
    write_file(dir / "trials.csv", trials_csv(rows));
    write_file(dir / "summary.csv", summary_csv(summary));
  }
  return {std::move(profile), std::move(rows), std::move(summary)};
}

double predicted_tube_rate(double sigma_q_sq, const TubeRegion& tube) {
  return std::numbers::pi * std::numbers::pi * sigma_q_sq / 2.0 * h2(tube);
}

std::vector<TubeRow> run_tube_study(const TubeStudyConfig& config) {
  const LDProfile profile = ld_profile(parse_distribution(config.dist_spec), config.b);
  const StepDistribution q = tilt(profile.centered_dist, profile.lambda_minus);
  const double predicted = predicted_tube_rate(profile.sigma_q_sq, config.tube);
  std::vector<TubeRow> rows;
  for (int n : config.n_grid) {
    const StayEstimate e = estimate_stay_prob(q, config.tube, n, config.samples, mix64(config.seed ^ n), 0.0,
                                              config.workers);
    rows.push_back({n, e.samples, e.p_hat, e.std_err, e.rate_hat, predicted, e.zero_hits});
  }
  return rows;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::string out = "n,trial,seed,l_n,l_n_over_cbrt_n,nodes_explored,budget_exhausted,lower_bound\n";
  for (const TrialRow& r : rows)
    out += std::to_string(r.n) + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           format_real(r.l_n) + "," + format_real(r.l_n_over_cbrt_n) + "," + std::to_string(r.nodes_explored) + "," +
           (r.budget_exhausted ? "1" : "0") + "," + format_real(r.lower_bound) + "\n";
  return out;
}

std::string summary_csv(const OffsetSummary& s) {
  std::string out = "n,trials,median,mean,q1,q3,exhausted_fraction,median_lower_bound,slope,intercept,l0_reference\n";
  for (const LevelSummary& l : s.levels)
    out += std::to_string(l.n) + "," + std::to_string(l.trials) + "," + format_real(l.median) + "," +
           format_real(l.mean) + "," + format_real(l.q1) + "," + format_real(l.q3) + "," +
           format_real(l.exhausted_fraction) + "," + format_real(l.median_lower_bound) + "," +
           format_real(s.slope) + "," + format_real(s.intercept) + "," + format_real(s.l0_reference) + "\n";
  return out;
}

std::string tube_csv(const std::vector<TubeRow>& rows) {
  std::string out = "n,samples,p_hat,std_err,rate_hat,predicted_rate,zero_hits\n";
  for (const TubeRow& r : rows)
    out += std::to_string(r.n) + "," + std::to_string(r.samples) + "," + format_real(r.p_hat) + "," +
           format_real(r.std_err) + "," + format_real(r.rate_hat) + "," + format_real(r.predicted_rate) + "," +
           (r.zero_hits ? "1" : "0") + "\n";
  return out;
}

std::vector<TrialRow> parse_trials_csv(std::string_view text) {
  std::vector<TrialRow> rows;
  bool header = true;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw ConfigError("trials.csv line " + std::to_string(line_no) + ": expected 8 fields", line_no);
    const auto real = [&](std::string_view s) { return std::strtod(std::string(s).c_str(), nullptr); };
    rows.push_back({parse_int<int>(f[0], line_no, "n"), parse_int<int>(f[1], line_no, "trial"),
                    parse_int<std::uint64_t>(f[2], line_no, "seed"), real(f[3]), real(f[4]),
                    parse_int<std::uint64_t>(f[5], line_no, "nodes_explored"), f[6] == "1", real(f[7])});
  }
  return rows;
}

}  // namespace brwlab
