#include "nbtrace/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "nbtrace/parallel.hpp"
#include "nbtrace/rng.hpp"
#include "nbtrace/word_map.hpp"

namespace nbtrace {

double main_bound(int d) {
  if (d < 3) throw std::domain_error("main bound needs d >= 3");
  const double s = std::sqrt(d - 1.0);
  return 2.0 * s + 2.0 / s;
}

double even_bound(int d) {
  if (d < 4 || d % 2 != 0) throw std::domain_error("even bound needs even d >= 4");
  const double s = std::sqrt(d - 1.0);
  return 2.0 * s + 0.6 / s;
}

double mu_bound(int d) {
  if (d < 3) throw std::domain_error("mu bound needs d >= 3");
  const double s = std::sqrt(d - 1.0);
  return s * std::exp(2.0 / (std::numbers::e * s));
}

double beta_objective(double beta) { return 2.0 * beta * std::exp(-2.0 * beta / std::numbers::e); }

BetaAnalysis beta_analysis(int grid_points) {
  if (grid_points < 1000) throw std::invalid_argument("beta analysis needs at least 1000 grid points");
  constexpr double lo = 0.5;
  constexpr double hi = 5.0;
  const double step = (hi - lo) / (grid_points - 1);
  BetaAnalysis out;
  out.grid_points = grid_points;
  out.left_endpoint_value = beta_objective(lo);
  for (int i = 0; i < grid_points; ++i) {
    const double beta = lo + step * i;
    const double f = beta_objective(beta);
    if (f > out.grid_max) {
      out.grid_max = f;
      out.grid_argmax = beta;
    }
  }
  // Golden-section search on the bracketing grid cells; f is unimodal here.
  double a = std::max(lo, out.grid_argmax - step);
  double b = std::min(hi, out.grid_argmax + step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  while (b - a > 1e-12) {
    if (beta_objective(c) > beta_objective(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - ratio * (b - a);
    d = a + ratio * (b - a);
  }
  out.refined_argmax = (a + b) / 2.0;
  out.refined_max = beta_objective(out.refined_argmax);
  return out;
}

GraphModel parse_model(const std::string& name) {
  if (name == "permutation") return GraphModel::permutation;
  if (name == "uniform-simple") return GraphModel::uniform_simple;
  throw std::invalid_argument("unknown model '" + name + "' (expected permutation or uniform-simple)");
}

std::string model_name(GraphModel model) {
  return model == GraphModel::permutation ? "permutation" : "uniform-simple";
}

namespace {

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 3) throw std::invalid_argument("experiment needs d >= 3");
  if (cfg.model == GraphModel::permutation && cfg.d % 2 != 0) {
    throw std::invalid_argument("the permutation model needs even d");
  }
  if (cfg.trials < 1) throw std::invalid_argument("experiment needs trials >= 1");
  if (cfg.n_values.empty()) throw std::invalid_argument("experiment needs at least one n");
  for (int n : cfg.n_values) {
    if (n < 2) throw std::invalid_argument("experiment needs n >= 2");
  }
}

TrialRecord run_trial(const ExperimentConfig& cfg, int n, int trial) {
  TrialRecord r;
  r.trial = trial;
  r.n = n;
  r.d = cfg.d;
  r.model = cfg.model;
  r.seed = derive_seed(cfg.seed, "bounds/" + std::to_string(n), static_cast<std::uint64_t>(trial));
  try {
    RegularGraph g = cfg.model == GraphModel::permutation
                         ? sample_permutation_model(n, cfg.d / 2, r.seed)
                         : sample_uniform_simple(n, cfg.d, r.seed, cfg.max_attempts);
    SpectrumReport s = spectrum_report(g, cfg.eigen);
    r.lambda = s.lambda;
    r.mu = s.mu;
    r.connected = s.connected;
    r.below_main = r.lambda <= main_bound(cfg.d);
    if (cfg.d >= 4 && cfg.d % 2 == 0) r.below_even = r.lambda <= even_bound(cfg.d);
    r.relation_ok = lambda_mu_relation_check(r.lambda, r.mu, cfg.d, 1e-6, 1e-9);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

BoundExperiment run_bound_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto per_n = static_cast<std::size_t>(cfg.trials);
  BoundExperiment exp;
  exp.records.resize(cfg.n_values.size() * per_n);
  parallel_for(exp.records.size(), cfg.workers, [&](std::size_t i) {
    exp.records[i] = run_trial(cfg, cfg.n_values[i / per_n], static_cast<int>(i % per_n));
  });
  for (std::size_t j = 0; j < cfg.n_values.size(); ++j) {
    BoundSummary s;
    s.n = cfg.n_values[j];
    int main_hits = 0;
    int even_hits = 0;
    bool has_even = false;
    for (std::size_t i = j * per_n; i < (j + 1) * per_n; ++i) {
      const auto& r = exp.records[i];
      if (!r.error.empty()) {
        ++s.failed;
        continue;
      }
      ++s.completed;
      main_hits += r.below_main ? 1 : 0;
      if (r.below_even) {
        has_even = true;
        even_hits += *r.below_even ? 1 : 0;
      }
      s.relation_failures += r.relation_ok ? 0 : 1;
    }
    if (s.completed > 0) {
      s.fraction_below_main = static_cast<double>(main_hits) / s.completed;
      if (has_even) s.fraction_below_even = static_cast<double>(even_hits) / s.completed;
    }
    exp.summaries.push_back(s);
  }
  return exp;
}

namespace {

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const BoundExperiment& exp) {
  os << "trial,n,d,model,seed,lambda,mu,connected,below_main,below_even\n";
  for (const auto& r : exp.records) {
    os << r.trial << ',' << r.n << ',' << r.d << ',' << model_name(r.model) << ',' << r.seed << ',';
    if (!r.error.empty()) {
      os << ",,,,\n";
      continue;
    }
    os << fixed(r.lambda) << ',' << fixed(r.mu) << ',' << (r.connected ? 1 : 0) << ','
       << (r.below_main ? 1 : 0) << ',';
    if (r.below_even) os << (*r.below_even ? 1 : 0);
    os << '\n';
  }
}

void write_json(std::ostream& os, const BoundExperiment& exp) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : exp.records) {
    nlohmann::ordered_json j;
    j["trial"] = r.trial;
    j["n"] = r.n;
    j["d"] = r.d;
    j["model"] = model_name(r.model);
    j["seed"] = r.seed;
    if (!r.error.empty()) {
      j["error"] = r.error;
    } else {
      j["lambda"] = r.lambda;
      j["mu"] = r.mu;
      j["connected"] = r.connected;
      j["below_main"] = r.below_main;
      j["below_even"] = r.below_even ? nlohmann::ordered_json(*r.below_even) : nlohmann::ordered_json(nullptr);
      j["lambda_mu_relation"] = r.relation_ok;
    }
    records.push_back(std::move(j));
  }
  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  for (const auto& s : exp.summaries) {
    nlohmann::ordered_json j;
    j["n"] = s.n;
    j["completed"] = s.completed;
    j["failed"] = s.failed;
    j["fraction_below_main"] = s.fraction_below_main;
    j["fraction_below_even"] =
        s.fraction_below_even ? nlohmann::ordered_json(*s.fraction_below_even) : nlohmann::ordered_json(nullptr);
    j["relation_failures"] = s.relation_failures;
    summaries.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["records"] = std::move(records);
  doc["summaries"] = std::move(summaries);
  os << doc.dump(2) << '\n';
}

Decomposition moment_decomposition(int k, int t, int n, std::uint64_t mc_trials, std::uint64_t seed,
                                   WordDomain domain, int workers) {
  if (t < 1) throw std::invalid_argument("decomposition needs t >= 1");
  if (static_cast<long long>(n) <= static_cast<long long>(t) * t) {
    throw std::domain_error("decomposition needs N > t^2");
  }
  if (t > kDefaultQuotientCap) throw QuotientCapExceeded(t, kDefaultQuotientCap);
  std::vector<Word> words = domain == WordDomain::cyclically_reduced ? enumerate_cyclically_reduced(k, t)
                                                                     : enumerate_reduced(k, t);
  ClassifyOptions options;
  options.workers = workers;
  ClassificationCache cache(options);
  cache.fill(words, workers);

  struct Group {
    std::uint64_t words = 0;
    std::uint64_t crit_sum = 0;
    std::vector<std::size_t> members;
  };
  std::map<int, Group> groups;  // key: pi, with infinity mapped past k
  for (std::size_t i = 0; i < words.size(); ++i) {
    const ClassSummary* s = cache.lookup(words[i]);
    const int key = s->pi.finite() ? s->pi.value : k + 1;
    auto& g = groups[key];
    ++g.words;
    g.crit_sum += s->crit_size;
    if (s->pi.finite()) g.members.push_back(i);
  }

  std::vector<ExpectationEstimate> estimates(words.size());
  std::vector<std::size_t> to_estimate;
  for (const auto& [key, g] : groups) to_estimate.insert(to_estimate.end(), g.members.begin(), g.members.end());
  parallel_for(to_estimate.size(), workers, [&](std::size_t j) {
    const std::size_t i = to_estimate[j];
    estimates[i] = mc_expectation(words[i], static_cast<std::uint32_t>(n), mc_trials,
                                  derive_seed(seed, "decompose", i));
  });

  Decomposition out;
  out.k = k;
  out.t = t;
  out.n = n;
  out.domain = domain;
  double total_var = 0.0;
  for (const auto& [key, g] : groups) {
    DecompositionRow row;
    row.words = g.words;
    row.crit_sum = g.crit_sum;
    if (key > k) {
      row.pi.value = PrimitivityRank::kInfinite;
      row.exact = true;  // E[F_w(N)] = 1 for primitive w
    } else {
      row.pi.value = key;
      double var = 0.0;
      for (std::size_t i : g.members) {
        row.excess += estimates[i].mean - 1.0;
        var += estimates[i].std_error * estimates[i].std_error;
      }
      row.std_error = std::sqrt(var);
      total_var += var;
      const double td = t;
      row.bound = static_cast<double>(g.crit_sum) / std::pow(static_cast<double>(n), key - 1) *
                  (1.0 + std::pow(td, 2.0 + 2.0 * key) / (n - td * td));
    }
    out.total_excess += row.excess;
    out.rows.push_back(row);
  }
  out.total_std_error = std::sqrt(total_var);

  if (domain == WordDomain::cyclically_reduced) {
    const auto cr = static_cast<double>(count_cyclically_reduced(k, t).count);
    std::vector<double> samples(mc_trials);
    parallel_for(mc_trials, workers, [&](std::size_t i) {
      RegularGraph g = sample_permutation_model(n, k, derive_seed(seed, "decompose/graph", i));
      samples[i] = static_cast<double>(nb_walk_count(g, t)) - cr;
    });
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / static_cast<double>(mc_trials);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    out.graph_total = mean;
    out.graph_std_error = mc_trials > 1 ? std::sqrt(ss / static_cast<double>(mc_trials - 1) / static_cast<double>(mc_trials))
                                        : 0.0;
  }
  return out;
}

std::vector<GrowthRow> growth_table(int k, const std::vector<int>& t_values, int m, double slack, WordDomain domain,
                                    int workers) {
  if (k < 2 || m < 1 || m > k) throw std::invalid_argument("growth table needs k >= 2 and 1 <= m <= k");
  const double limit = std::max(std::sqrt(2.0 * k - 1.0), 2.0 * m - 1.0);
  ClassifyOptions options;
  options.workers = workers;
  std::vector<GrowthRow> rows;
  for (int t : t_values) {
    GrowthRow row;
    row.t = t;
    row.crit_sum = crit_sum(k, t, m, domain, options);
    row.root = std::pow(static_cast<double>(row.crit_sum), 1.0 / t);
    row.limit = limit;
    row.within_slack = row.root <= limit + slack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nbtrace
