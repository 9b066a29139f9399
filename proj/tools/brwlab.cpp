// brwlab: command-line front end for the branching-random-walk toolkit.
//
// Exit codes: 0 success, 2 configuration error, 3 assumption violated,
// 4 node budget exhausted on more than half of the trials.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "brwlab/barrier.hpp"
#include "brwlab/brw.hpp"
#include "brwlab/dist.hpp"
#include "brwlab/errors.hpp"
#include "brwlab/harness.hpp"
#include "brwlab/ldtool.hpp"
#include "brwlab/mogulskii.hpp"

namespace {

using namespace brwlab;

constexpr int kExitConfig = 2;
constexpr int kExitAssumption = 3;
constexpr int kExitBudget = 4;

const CLI::Range kBranching(2, std::numeric_limits<int>::max());

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("malformed seed '" + text + "'");
  return v;
}

// `s0..s1` (inclusive), a single seed, or a comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = parse_u64(text.substr(0, dots));
    const std::uint64_t hi = parse_u64(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("seed range '" + text + "' is empty");
    for (std::uint64_t s = lo;; ++s) {
      seeds.push_back(s);
      if (s == hi) break;
    }
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    seeds.push_back(parse_u64(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return seeds;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty())
      throw ConfigError("malformed integer '" + item + "'");
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistent minimal displacement of branching random walks"};
  app.require_subcommand(1);

  std::string dist_spec;
  int b = 2;

  auto* profile_cmd = app.add_subcommand("profile", "large-deviation constants as one CSV row");
  profile_cmd->add_option("--dist", dist_spec, "step law")->required();
  profile_cmd->add_option("--b", b, "branching factor")->required()->check(kBranching);

  double l = 0, delta = 0;
  int inv_eps = 0;
  std::optional<double> l1;
  auto* barrier_cmd = app.add_subcommand("barrier", "Euler barrier curve against its closed form");
  barrier_cmd->add_option("--dist", dist_spec)->required();
  barrier_cmd->add_option("--b", b)->required()->check(kBranching);
  barrier_cmd->add_option("--l", l)->required();
  barrier_cmd->add_option("--delta", delta)->required();
  barrier_cmd->add_option("--inv-eps", inv_eps)->required();
  barrier_cmd->add_option("--l1", l1, "report the first crossing of l1");

  double c = 0;
  int grid = 0;
  auto* var_cmd = app.add_subcommand("variational", "minimax barrier problem");
  var_cmd->add_option("--c", c)->required();
  var_cmd->add_option("--grid", grid)->required();

  int n = 0;
  std::string n_list;
  std::string seeds_text;
  std::uint64_t node_budget = 1'000'000'000;
  std::uint64_t pop_budget = 100'000'000;
  int workers = 1;
  auto* offset_cmd = app.add_subcommand("offset", "exact L_n per seed");
  offset_cmd->add_option("--dist", dist_spec)->required();
  offset_cmd->add_option("--b", b)->required()->check(kBranching);
  offset_cmd->add_option("--n", n)->required();
  offset_cmd->add_option("--seeds", seeds_text, "s0..s1, a single seed, or a list")->required();
  offset_cmd->add_option("--node-budget", node_budget);

  double barrier_l = 0;
  auto* count_cmd = app.add_subcommand("count", "particles staying below l*n^{1/3}");
  count_cmd->add_option("--dist", dist_spec)->required();
  count_cmd->add_option("--b", b)->required()->check(kBranching);
  count_cmd->add_option("--n", n)->required();
  count_cmd->add_option("--seeds", seeds_text)->required();
  count_cmd->add_option("--barrier-l", barrier_l)->required();
  count_cmd->add_option("--pop-budget", pop_budget);

  std::string tube_text;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  auto* tube_cmd = app.add_subcommand("tube", "Monte Carlo tube probability under the tilted law");
  tube_cmd->add_option("--dist", dist_spec)->required();
  tube_cmd->add_option("--b", b)->required()->check(kBranching);
  tube_cmd->add_option("--tube", tube_text, "t0:f1:f2;t1:f1:f2;...")->required();
  tube_cmd->add_option("--n", n_list, "one n or a comma-separated list")->required();
  tube_cmd->add_option("--samples", samples)->required();
  tube_cmd->add_option("--seed", seed)->required();
  tube_cmd->add_option("--workers", workers);

  std::string config_path;
  auto* study_cmd = app.add_subcommand("study", "convergence study of L_n / n^{1/3}");
  study_cmd->add_option("--config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (profile_cmd->parsed()) {
      const LDProfile p = ld_profile(parse_distribution(dist_spec), b);
      std::cout << "dist,b,lambda_minus,lambda_plus,m,M,sigma_q_sq,l0\n"
                << csv_field(dist_spec) << ',' << b << ',' << format_real(p.lambda_minus) << ','
                << format_real(p.lambda_plus) << ',' << format_real(p.m) << ',' << format_real(p.M) << ','
                << format_real(p.sigma_q_sq) << ',' << format_real(p.l0) << '\n';
    } else if (barrier_cmd->parsed()) {
      const LDProfile p = ld_profile(parse_distribution(dist_spec), b);
      const EulerOutcome e = euler_curve(p, l, delta, inv_eps);
      std::cout << "k,s_k,w_k,s_closed_form\n";
      for (std::size_t k = 0; k < e.curve.s.size(); ++k) {
        const double t = static_cast<double>(k) / inv_eps;
        std::cout << k << ',' << format_real(e.curve.s[k]) << ',' << format_real(e.curve.w[k]) << ','
                  << format_real(closed_form_s(l + delta, p.sigma_q_sq, p.lambda_minus, t)) << '\n';
      }
      if (e.blowup_step) std::cout << "# blowup_step=" << *e.blowup_step << '\n';
      if (l1) {
        const Crossing cross = first_crossing_K(e.curve, *l1);
        if (cross.k)
          std::cout << "# K=" << *cross.k << " gamma_slack=" << format_real(cross.gamma_slack) << '\n';
        else
          std::cout << "# K=not_crossed\n";
      }
    } else if (var_cmd->parsed()) {
      const VariationalSolution sol = solve_variational(c, grid);
      std::cout << "t,w_star\n";
      for (std::size_t j = 0; j < sol.w_star.size(); ++j)
        std::cout << format_real(static_cast<double>(j) / grid) << ',' << format_real(sol.w_star[j]) << '\n';
      std::cout << "# value=" << format_real(sol.value) << '\n';
    } else if (offset_cmd->parsed()) {
      const LDProfile p = ld_profile(parse_distribution(dist_spec), b);
      const auto seeds = parse_seeds(seeds_text);
      std::size_t exhausted = 0;
      std::cout << "seed,n,l_n,l_n_over_cbrt_n,nodes_explored,budget_exhausted\n";
      for (std::uint64_t s : seeds) {
        const OffsetResult r = exact_offset(p.centered_dist, TreeRandomness(s, b), n, node_budget);
        exhausted += r.budget_exhausted ? 1 : 0;
        std::cout << s << ',' << n << ',' << format_real(r.l_n) << ','
                  << format_real(n > 0 ? r.l_n / std::cbrt(static_cast<double>(n)) : 0.0) << ',' << r.nodes_explored
                  << ',' << (r.budget_exhausted ? 1 : 0) << '\n';
      }
      if (2 * exhausted > seeds.size()) return kExitBudget;
    } else if (count_cmd->parsed()) {
      const LDProfile p = ld_profile(parse_distribution(dist_spec), b);
      const double barrier = barrier_l * std::cbrt(static_cast<double>(n));
      std::cout << "seed,n,barrier,count,truncated\n";
      for (std::uint64_t s : parse_seeds(seeds_text)) {
        const CountResult r = count_below_barrier(p.centered_dist, TreeRandomness(s, b), n, barrier, pop_budget);
        std::cout << s << ',' << n << ',' << format_real(barrier) << ',' << r.count << ','
                  << (r.truncated ? 1 : 0) << '\n';
      }
    } else if (tube_cmd->parsed()) {
      TubeStudyConfig cfg{dist_spec, b, parse_tube(tube_text), parse_int_list(n_list), samples, seed, workers};
      std::cout << "n,samples,p_hat,std_err,rate_hat,predicted_rate\n";
      for (const TubeRow& r : run_tube_study(cfg))
        std::cout << r.n << ',' << r.samples << ',' << format_real(r.p_hat) << ',' << format_real(r.std_err) << ','
                  << format_real(r.rate_hat) << ',' << format_real(r.predicted_rate) << '\n';
    } else if (study_cmd->parsed()) {
      const StudyResult result = run_convergence_study(load_config(config_path));
      std::cout << summary_csv(result.summary);
      std::size_t exhausted = 0;
      for (const TrialRow& r : result.rows) exhausted += r.budget_exhausted ? 1 : 0;
      if (2 * exhausted > result.rows.size()) return kExitBudget;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const AssumptionViolated& e) {
    std::cerr << "assumption violated: " << e.what() << '\n';
    return kExitAssumption;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
