#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbtrace/core_graph.hpp"
#include "nbtrace/experiments.hpp"
#include "nbtrace/parallel.hpp"
#include "nbtrace/primitivity.hpp"
#include "nbtrace/regular_graph.hpp"
#include "nbtrace/spectra.hpp"
#include "nbtrace/word.hpp"
#include "nbtrace/word_map.hpp"

using json = nlohmann::ordered_json;
using namespace nbtrace;

namespace {

WordDomain parse_domain(const std::string& s) {
  if (s == "cyclic") return WordDomain::cyclically_reduced;
  if (s == "reduced") return WordDomain::reduced;
  throw CLI::ValidationError("--domain", "expected cyclic or reduced");
}

std::string domain_name(WordDomain d) { return d == WordDomain::cyclically_reduced ? "cyclic" : "reduced"; }

json pi_json(PrimitivityRank pi) { return pi.finite() ? json(pi.value) : json("inf"); }

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Rank implied by the letters when --k is omitted.
Word parse_with_rank(const std::string& text, int k) {
  if (k > 0) return parse_word(text, k);
  Word w = parse_word(text, 26);
  return w.with_rank(std::max(1, w.max_generator()));
}

struct Options {
  int workers = 0;

  std::string word;
  int k = 0;
  int t = 0;
  int m = 1;
  int n = 0;
  int d = 4;
  int cap = kDefaultQuotientCap;
  bool cyclic = false;
  std::string domain = "cyclic";

  bool exact = false;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultExactBudget;

  std::string model = "permutation";
  std::string in;
  std::string out;
  std::string format = "csv";
  double tol = 1e-9;
  int tmax = 10;
  std::vector<int> n_list;
  std::vector<int> t_list;
  double slack = 0.5;
  int grid = 1000;
  int max_attempts = 100000;
  int run_trials = 30;
};

int words_count(const Options& o) {
  std::cout << count_cyclically_reduced(o.k, o.t).count << '\n';
  return 0;
}

int words_list(const Options& o) {
  WordEnumerator e(o.k, o.t, o.cyclic);
  while (auto w = e.next()) std::cout << to_string(*w) << '\n';
  return 0;
}

int words_classify(const Options& o) {
  Word w = parse_word(o.word, o.k);
  ClassifyOptions opts;
  opts.vertex_cap = o.cap;
  WordClassification c = primitivity_rank(w, opts);
  json j;
  j["word"] = to_string(w);
  j["pi"] = pi_json(c.pi);
  j["crit_size"] = c.crit_size();
  json crit = json::array();
  for (const auto& g : c.crit) crit.push_back(canonical_form(g));
  j["crit"] = std::move(crit);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int words_crit_sum(const Options& o) {
  ClassifyOptions opts;
  opts.vertex_cap = o.cap;
  opts.workers = resolve_workers(o.workers);
  std::cout << crit_sum(o.k, o.t, o.m, parse_domain(o.domain), opts) << '\n';
  return 0;
}

int stallings_core(const Options& o) {
  CoreGraph g = core_of_word(parse_with_rank(o.word, o.k));
  std::cout << describe(g);
  return 0;
}

int stallings_quotients(const Options& o) {
  CoreGraph g = core_of_word(parse_with_rank(o.word, o.k));
  for_each_quotient(g, o.cap, [](const CoreGraph& q) {
    std::cout << canonical_form(q) << " rank " << q.subgroup_rank() << '\n';
  });
  return 0;
}

int wordmap_expect(const Options& o) {
  Word w = parse_word(o.word, o.k);
  const auto n = static_cast<std::uint32_t>(o.n);
  ExpectationEstimate e = o.exact ? exact_expectation(w, n, o.budget)
                                  : mc_expectation(w, n, o.trials, o.seed, resolve_workers(o.workers));
  json j;
  j["mean"] = e.mean;
  j["std_error"] = e.std_error;
  j["trials"] = e.trials;
  j["exact"] = e.exact;
  if (e.exact) j["fraction"] = std::to_string(e.numerator) + "/" + std::to_string(e.denominator);
  WordClassification c = primitivity_rank(w);
  j["pi"] = pi_json(c.pi);
  const auto len = static_cast<long long>(w.length());
  if (c.pi.finite() && c.pi.value >= 1 && o.n > len * len) j["pp15_bound"] = expectation_upper_bound(c, n);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int graph_sample(const Options& o) {
  RegularGraph g = [&] {
    if (parse_model(o.model) == GraphModel::permutation) {
      if (o.d % 2 != 0) throw CLI::ValidationError("--d", "the permutation model needs even d");
      return sample_permutation_model(o.n, o.d / 2, o.seed);
    }
    return sample_uniform_simple(o.n, o.d, o.seed, o.max_attempts);
  }();
  if (o.out.empty()) {
    write_graph(std::cout, g);
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open " + o.out);
    write_graph(f, g);
  }
  return 0;
}

int graph_nbwalks(const Options& o) {
  std::cout << nb_walk_count(load_graph(o.in), o.t) << '\n';
  return 0;
}

int spectra_report_cmd(const Options& o) {
  RegularGraph g = load_graph(o.in);
  SpectrumReport r = spectrum_report(g);
  json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["connected"] = r.connected;
  j["adjacency"] = r.adjacency_eigenvalues;
  json hash = json::array();
  for (const auto& z : r.hashimoto_eigenvalues) hash.push_back({z.real(), z.imag()});
  j["hashimoto"] = std::move(hash);
  if (r.n >= 2) {
    j["lambda"] = r.lambda;
    j["mu"] = r.mu;
    j["lambda_mu_relation"] = lambda_mu_relation_check(r, o.tol);
    if (r.d >= 3) {
      j["main_bound"] = main_bound(r.d);
      j["below_main"] = r.lambda <= main_bound(r.d);
    }
    if (r.d >= 4 && r.d % 2 == 0) {
      j["even_bound"] = even_bound(r.d);
      j["below_even"] = r.lambda <= even_bound(r.d);
    }
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int spectra_verify_ib(const Options& o) {
  IharaBassReport r = verify_ihara_bass(load_graph(o.in), o.tmax, 1e-8);
  std::cout << "t,walk_count,dictionary_sum_real,dictionary_sum_imag,abs_error\n";
  for (const auto& row : r.rows) {
    std::cout << row.t << ',' << row.walk_count << ',' << num(row.dictionary_sum.real()) << ','
              << num(row.dictionary_sum.imag()) << ',' << num(row.abs_error) << '\n';
  }
  return r.ok() ? 0 : 1;
}

int exp_bounds(const Options& o) {
  json j;
  j["d"] = o.d;
  j["ramanujan"] = 2.0 * std::sqrt(o.d - 1.0);
  j["main_bound"] = main_bound(o.d);
  if (o.d >= 4 && o.d % 2 == 0) j["even_bound"] = even_bound(o.d);
  j["mu_bound"] = mu_bound(o.d);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int exp_beta(const Options& o) {
  BetaAnalysis b = beta_analysis(o.grid);
  json j;
  j["grid_points"] = b.grid_points;
  j["grid_max"] = b.grid_max;
  j["grid_argmax"] = b.grid_argmax;
  j["refined_max"] = b.refined_max;
  j["refined_argmax"] = b.refined_argmax;
  j["left_endpoint_value"] = b.left_endpoint_value;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int exp_run(const Options& o) {
  ExperimentConfig cfg;
  cfg.model = parse_model(o.model);
  cfg.d = o.d;
  cfg.n_values = o.n_list;
  cfg.trials = o.run_trials;
  cfg.seed = o.seed;
  cfg.workers = resolve_workers(o.workers);
  cfg.max_attempts = o.max_attempts;
  BoundExperiment e = run_bound_experiment(cfg);
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw std::runtime_error("cannot open " + o.out);
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  if (o.format == "json") {
    write_json(os, e);
  } else {
    write_csv(os, e);
  }
  for (const auto& s : e.summaries) {
    std::cerr << "n=" << s.n << " completed=" << s.completed << " failed=" << s.failed
              << " below_main=" << num(s.fraction_below_main);
    if (s.fraction_below_even) std::cerr << " below_even=" << num(*s.fraction_below_even);
    std::cerr << " relation_failures=" << s.relation_failures << '\n';
  }
  return 0;
}

int exp_decompose(const Options& o) {
  Decomposition dec =
      moment_decomposition(o.k, o.t, o.n, o.trials, o.seed, parse_domain(o.domain), resolve_workers(o.workers));
  json rows = json::array();
  for (const auto& r : dec.rows) {
    json j;
    j["pi"] = pi_json(r.pi);
    j["words"] = r.words;
    j["crit_sum"] = r.crit_sum;
    j["excess"] = r.excess;
    j["std_error"] = r.std_error;
    j["exact"] = r.exact;
    j["bound"] = r.bound ? json(*r.bound) : json(nullptr);
    rows.push_back(std::move(j));
  }
  json j;
  j["k"] = dec.k;
  j["t"] = dec.t;
  j["n"] = dec.n;
  j["domain"] = domain_name(dec.domain);
  j["rows"] = std::move(rows);
  j["total_excess"] = dec.total_excess;
  j["total_std_error"] = dec.total_std_error;
  if (dec.graph_total) {
    j["graph_total"] = *dec.graph_total;
    j["graph_std_error"] = *dec.graph_std_error;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int exp_growth(const Options& o) {
  auto rows = growth_table(o.k, o.t_list, o.m, o.slack, parse_domain(o.domain), resolve_workers(o.workers));
  std::cout << "t,crit_sum,root,limit,within_slack\n";
  for (const auto& r : rows) {
    std::cout << r.t << ',' << r.crit_sum << ',' << num(r.root) << ',' << num(r.limit) << ','
              << (r.within_slack ? 1 : 0) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-backtracking trace method toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--workers", o.workers, std::string("Worker threads (default: $") + kWorkersEnv +
                                             ", then hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  int (*action)(const Options&) = nullptr;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, int (*fn)(const Options&)) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  CLI::App* words = app.add_subcommand("words", "Free group words")->require_subcommand(1);
  CLI::App* c = leaf(words, "count", "Count cyclically reduced words", words_count);
  c->add_option("--k", o.k)->required()->check(CLI::Range(1, 26));
  c->add_option("--t", o.t)->required()->check(CLI::NonNegativeNumber);
  c = leaf(words, "list", "List reduced words", words_list);
  c->add_option("--k", o.k)->required()->check(CLI::Range(1, 26));
  c->add_option("--t", o.t)->required()->check(CLI::NonNegativeNumber);
  c->add_flag("--cyclic", o.cyclic, "Only cyclically reduced words");
  c = leaf(words, "classify", "Primitivity rank and critical subgroups", words_classify);
  c->add_option("--word", o.word)->required();
  c->add_option("--k", o.k)->required()->check(CLI::Range(1, 26));
  c->add_option("--cap", o.cap, "Quotient vertex cap");
  c = leaf(words, "crit-sum", "Sum of |Crit(w)| over words with pi(w) = m", words_crit_sum);
  c->add_option("--k", o.k)->required()->check(CLI::Range(1, 26));
  c->add_option("--t", o.t)->required()->check(CLI::PositiveNumber);
  c->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  c->add_option("--domain", o.domain)->check(CLI::IsMember({"cyclic", "reduced"}));
  c->add_option("--cap", o.cap, "Quotient vertex cap");

  CLI::App* st = app.add_subcommand("stallings", "Stallings core graphs")->require_subcommand(1);
  c = leaf(st, "core", "Core graph of <w>", stallings_core);
  c->add_option("--word", o.word)->required();
  c->add_option("--k", o.k)->check(CLI::Range(1, 26));
  c = leaf(st, "quotients", "Distinct quotients of the core graph of <w>", stallings_quotients);
  c->add_option("--word", o.word)->required();
  c->add_option("--k", o.k)->check(CLI::Range(1, 26));
  c->add_option("--cap", o.cap, "Quotient vertex cap");

  CLI::App* wm = app.add_subcommand("wordmap", "Word maps on random permutations")->require_subcommand(1);
  c = leaf(wm, "expect", "Expected fixed points of w(sigma_1..sigma_k)", wordmap_expect);
  c->add_option("--word", o.word)->required();
  c->add_option("--k", o.k)->required()->check(CLI::Range(1, 26));
  c->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  auto* ex = c->add_flag("--exact", o.exact, "Full sweep over S_n tuples");
  c->add_option("--trials", o.trials)->excludes(ex)->check(CLI::Range(2ULL, 1ULL << 40));
  c->add_option("--seed", o.seed)->excludes(ex);
  c->add_option("--budget", o.budget, "Tuple budget for --exact");

  CLI::App* gr = app.add_subcommand("graph", "Random regular graphs")->require_subcommand(1);
  c = leaf(gr, "sample", "Sample a regular graph", graph_sample);
  c->add_option("--model", o.model)->check(CLI::IsMember({"permutation", "uniform-simple"}));
  c->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  c->add_option("--d", o.d)->required()->check(CLI::PositiveNumber);
  c->add_option("--seed", o.seed)->required();
  c->add_option("--out", o.out);
  c->add_option("--max-attempts", o.max_attempts)->check(CLI::PositiveNumber);
  c = leaf(gr, "nbwalks", "tr(B^t) by exact walk counting", graph_nbwalks);
  c->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  c->add_option("--t", o.t)->required()->check(CLI::PositiveNumber);

  CLI::App* sp = app.add_subcommand("spectra", "Adjacency and Hashimoto spectra")->require_subcommand(1);
  c = leaf(sp, "report", "Both spectra, lambda, mu and connectivity", spectra_report_cmd);
  c->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  c->add_option("--tol", o.tol, "Tolerance of the lambda-mu check");
  c = leaf(sp, "verify-ib", "Compare tr(B^t) with the dictionary power sums", spectra_verify_ib);
  c->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  c->add_option("--tmax", o.tmax)->required()->check(CLI::PositiveNumber);

  CLI::App* ex_app = app.add_subcommand("exp", "Experiments")->require_subcommand(1);
  c = leaf(ex_app, "bounds", "Closed-form eigenvalue bounds", exp_bounds);
  c->add_option("--d", o.d)->required()->check(CLI::Range(3, 1 << 20));
  c = leaf(ex_app, "beta", "Maximize 2 beta exp(-2 beta / e)", exp_beta);
  c->add_option("--grid", o.grid)->check(CLI::Range(1000, 100000000));
  c = leaf(ex_app, "run", "Bound experiment over sampled graphs", exp_run);
  c->add_option("--model", o.model)->check(CLI::IsMember({"permutation", "uniform-simple"}));
  c->add_option("--d", o.d)->required()->check(CLI::Range(3, 1 << 20));
  c->add_option("--n", o.n_list)->required()->delimiter(',')->check(CLI::Range(2, 1 << 20));
  c->add_option("--trials", o.run_trials)->check(CLI::Range(1, 1 << 30));
  c->add_option("--seed", o.seed);
  c->add_option("--out", o.out);
  c->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  c->add_option("--max-attempts", o.max_attempts)->check(CLI::PositiveNumber);
  c = leaf(ex_app, "decompose", "Moment decomposition by primitivity rank", exp_decompose);
  c->add_option("--k", o.k)->required()->check(CLI::Range(1, 26));
  c->add_option("--t", o.t)->required()->check(CLI::PositiveNumber);
  c->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  c->add_option("--mc-trials", o.trials)->check(CLI::Range(2ULL, 1ULL << 40));
  c->add_option("--seed", o.seed);
  c->add_option("--domain", o.domain)->check(CLI::IsMember({"cyclic", "reduced"}));
  c = leaf(ex_app, "growth", "crit_sum growth against its limit", exp_growth);
  c->add_option("--k", o.k)->required()->check(CLI::Range(2, 26));
  c->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  c->add_option("--t", o.t_list)->required()->delimiter(',')->check(CLI::PositiveNumber);
  c->add_option("--slack", o.slack);
  c->add_option("--domain", o.domain)->check(CLI::IsMember({"cyclic", "reduced"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return action(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
