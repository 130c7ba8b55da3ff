#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nbtrace/primitivity.hpp"
#include "nbtrace/spectra.hpp"

namespace nbtrace {

// 2 sqrt(d-1) + 2/sqrt(d-1), any d >= 3.
double main_bound(int d);
// 2 sqrt(d-1) + 0.6/sqrt(d-1), even d >= 4.
double even_bound(int d);
// sqrt(d-1) * exp(2 / (e sqrt(d-1))), d >= 3.
double mu_bound(int d);

struct BetaAnalysis {
  int grid_points = 0;
  double grid_max = 0.0;
  double grid_argmax = 0.0;
  double refined_max = 0.0;
  double refined_argmax = 0.0;
  double left_endpoint_value = 0.0;  // at beta = 1/2
};

// Maximizes f(beta) = 2 beta exp(-2 beta / e) on a uniform grid over [1/2, 5],
// then refines around the grid argmax by golden-section search.
BetaAnalysis beta_analysis(int grid_points = 1000);
double beta_objective(double beta);

enum class GraphModel { permutation, uniform_simple };
GraphModel parse_model(const std::string& name);
std::string model_name(GraphModel model);

struct ExperimentConfig {
  GraphModel model = GraphModel::permutation;
  int d = 4;
  std::vector<int> n_values;
  int trials = 30;
  std::uint64_t seed = 1;
  int workers = 1;
  EigenOptions eigen;
  int max_attempts = 100000;  // uniform-simple rejection budget
};

struct TrialRecord {
  int trial = 0;
  int n = 0;
  int d = 0;
  GraphModel model = GraphModel::permutation;
  std::uint64_t seed = 0;  // seed of this trial's graph
  double lambda = 0.0;
  double mu = 0.0;
  bool connected = false;
  bool below_main = false;
  std::optional<bool> below_even;  // only for even d >= 4
  bool relation_ok = true;         // lambda-mu identity when mu > sqrt(d-1)
  std::string error;               // non-empty when sampling or the eigensolver failed
};

struct BoundSummary {
  int n = 0;
  int completed = 0;
  int failed = 0;
  double fraction_below_main = 0.0;
  std::optional<double> fraction_below_even;
  int relation_failures = 0;
};

struct BoundExperiment {
  std::vector<TrialRecord> records;  // ordered by (n, trial)
  std::vector<BoundSummary> summaries;
};

// Per-trial seed: derive_seed(seed, "bounds/<n>", trial).
BoundExperiment run_bound_experiment(const ExperimentConfig& cfg);

// Header: trial,n,d,model,seed,lambda,mu,connected,below_main,below_even
void write_csv(std::ostream& os, const BoundExperiment& exp);
void write_json(std::ostream& os, const BoundExperiment& exp);

struct DecompositionRow {
  PrimitivityRank pi;
  std::uint64_t words = 0;
  std::uint64_t crit_sum = 0;
  double excess = 0.0;      // sum over the group of E[F_w(N)] - 1
  double std_error = 0.0;
  bool exact = false;
  std::optional<double> bound;  // N^-(m-1) * crit_sum * (1 + t^(2+2m)/(N-t^2)); finite m only
};

struct Decomposition {
  int k = 0;
  int t = 0;
  int n = 0;
  WordDomain domain = WordDomain::cyclically_reduced;
  std::vector<DecompositionRow> rows;  // pi = 1..k, then infinity; empty groups omitted
  double total_excess = 0.0;
  double total_std_error = 0.0;
  // Independent estimate of the same total from sampled Schreier graphs:
  // mean of tr(B^t) - |CR_t| (cyclic domain only).
  std::optional<double> graph_total;
  std::optional<double> graph_std_error;
};

// Groups the words of length t by pi(w) and estimates sum (E[F_w(N)] - 1) per
// group by Monte Carlo. Primitive words contribute exactly 0.
Decomposition moment_decomposition(int k, int t, int n, std::uint64_t mc_trials, std::uint64_t seed,
                                   WordDomain domain = WordDomain::cyclically_reduced, int workers = 1);

struct GrowthRow {
  int t = 0;
  std::uint64_t crit_sum = 0;
  double root = 0.0;   // crit_sum^(1/t)
  double limit = 0.0;  // max(sqrt(2k-1), 2m-1)
  bool within_slack = false;
};

std::vector<GrowthRow> growth_table(int k, const std::vector<int>& t_values, int m, double slack = 0.5,
                                    WordDomain domain = WordDomain::cyclically_reduced, int workers = 1);

}  // namespace nbtrace
