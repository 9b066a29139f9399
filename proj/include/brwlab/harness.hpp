#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "brwlab/ldtool.hpp"
#include "brwlab/mogulskii.hpp"

namespace brwlab {

/// Convergence-study configuration, read from a `key = value` file.
/// Required keys: dist, b, n_grid, trials_per_n. Defaults: base_seed = 0,
/// node_budget = 1000000000, output_path = "" (nothing written), workers = 1.
struct ExperimentConfig {
  std::string dist_spec;
  int b = 2;
  std::vector<int> n_grid;
  int trials_per_n = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t node_budget = 1'000'000'000;
  std::string output_path;
  int workers = 1;
};

// Lines are `key = value`; `#` starts a comment; lists are comma-separated.
// Throws ConfigError carrying the offending line number and key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t trial_seed(std::uint64_t base_seed, int n, int trial);

struct TrialRow {
  int n;
  int trial;
  std::uint64_t seed;
  double l_n;
  double l_n_over_cbrt_n;
  std::uint64_t nodes_explored;
  bool budget_exhausted;
  double lower_bound;  // proven L_n > lower_bound; equals l_n for exact trials
};

struct LevelSummary {
  int n;
  int trials;
  double median;  // of L_n / n^{1/3}
  double mean;
  double q1;
  double q3;
  double exhausted_fraction;
  double median_lower_bound;  // of lower_bound / n^{1/3}
};

struct OffsetSummary {
  std::vector<LevelSummary> levels;
  double slope;      // least squares of log(median L_n) on log n
  double intercept;
  double l0_reference;
};

// Pure function of the rows; rows may arrive in any order.
OffsetSummary summarize(const std::vector<TrialRow>& rows, double l0_reference);

struct StudyResult {
  LDProfile profile;
  std::vector<TrialRow> rows;  // sorted by (n, trial)
  OffsetSummary summary;
};

// Runs exact_offset for every (n, trial) on the centered law. When
// output_path is set, writes <output_path>/trials.csv and summary.csv.
StudyResult run_convergence_study(const ExperimentConfig& config);

struct TubeStudyConfig {
  std::string dist_spec;
  int b = 2;
  TubeRegion tube = TubeRegion::constant(-1.0, 1.0);
  std::vector<int> n_grid;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct TubeRow {
  int n;
  std::uint64_t samples;
  double p_hat;
  double std_err;
  double rate_hat;
  double predicted_rate;  // (π²σ_Q²/2)·H₂(G)
  bool zero_hits;
};

// Estimates under Q = centered law tilted by λ₋, one row per n.
std::vector<TubeRow> run_tube_study(const TubeStudyConfig& config);

double predicted_tube_rate(double sigma_q_sq, const TubeRegion& tube);

// CSV: `,` separator, header row, LF endings, 17 significant digits.
std::string format_real(double v);
std::string trials_csv(const std::vector<TrialRow>& rows);
std::string summary_csv(const OffsetSummary& summary);
std::string tube_csv(const std::vector<TubeRow>& rows);
std::vector<TrialRow> parse_trials_csv(std::string_view text);

}  // namespace brwlab
