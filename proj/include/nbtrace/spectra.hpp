#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nbtrace/regular_graph.hpp"
#include "nbtrace/symmetric_eigen.hpp"

namespace nbtrace {

using Complex = std::complex<double>;

// Adjacency eigenvalues, descending.
std::vector<double> adjacency_spectrum(const RegularGraph& g, const EigenOptions& options = {});

// Hashimoto spectrum from the adjacency spectrum: both roots of
// mu^2 - lambda mu + (d-1) = 0 for every lambda, plus +1 and -1 each
// n(d-2)/2 times. The result has n*d entries; roots of lambda_i come at
// positions 2i, 2i+1 with the larger-modulus root first.
std::vector<Complex> hashimoto_from_adjacency(const std::vector<double>& adjacency_eigenvalues, int n, int d);

struct SpectrumReport {
  int n = 0;
  int d = 0;
  bool connected = false;
  std::vector<double> adjacency_eigenvalues;  // descending
  std::vector<Complex> hashimoto_eigenvalues;  // layout of hashimoto_from_adjacency
  double lambda = 0.0;                         // max(lambda_2, -lambda_n)
  double mu = 0.0;                             // largest |mu| after removing one copy of d-1
};

// Throws std::invalid_argument for n = 1 (lambda and mu need a second eigenvalue).
double lambda_of(const std::vector<double>& adjacency_eigenvalues);
double mu_of(const std::vector<Complex>& hashimoto_eigenvalues, int d);

SpectrumReport spectrum_report(const RegularGraph& g, const EigenOptions& options = {});

// When mu > sqrt(d-1) + tol, checks |lambda - (mu + (d-1)/mu)| <= tol;
// vacuously true otherwise.
bool lambda_mu_relation_check(const SpectrumReport& report, double tol);
bool lambda_mu_relation_check(double lambda, double mu, int d, double tol);

// Same, with separate thresholds for the branch test and the identity.
bool lambda_mu_relation_check(double lambda, double mu, int d, double branch_tol, double identity_tol);

// Sum of mu^t over the multiset, accumulated in long double.
Complex power_sum(const std::vector<Complex>& values, int t);

struct TraceRow {
  int t = 0;
  std::uint64_t walk_count = 0;
  Complex dictionary_sum;
  double abs_error = 0.0;
  bool ok = false;
  // Even t and even d only: tr(B^t) - (d-1)^t - (n(d-2) + 1), compared to the
  // power sum over the 2n-2 roots of the non-trivial adjacency eigenvalues.
  bool split_checked = false;
  double split_lhs = 0.0;
  double split_rhs = 0.0;
  bool split_ok = true;
};

struct IharaBassReport {
  std::vector<TraceRow> rows;
  bool ok() const;
};

// tr(B^t) two ways for t = 1..t_max: exact walk counts and the dictionary
// power sum. Rows pass when |walks - sum| <= tol * (d-1)^t.
IharaBassReport verify_ihara_bass(const RegularGraph& g, int t_max, double tol,
                                  const EigenOptions& options = {});

}  // namespace nbtrace
