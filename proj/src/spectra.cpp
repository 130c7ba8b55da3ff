#include "nbtrace/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nbtrace {

std::vector<double> adjacency_spectrum(const RegularGraph& g, const EigenOptions& options) {
  auto a = SymmetricMatrix::from_row_major(static_cast<std::size_t>(g.n()), g.adjacency());
  return symmetric_eigenvalues(std::move(a), options);
}

std::vector<Complex> hashimoto_from_adjacency(const std::vector<double>& adjacency_eigenvalues, int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("dictionary needs n >= 1 and d >= 1");
  if (adjacency_eigenvalues.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("dictionary expects " + std::to_string(n) + " adjacency eigenvalues, got " +
                                std::to_string(adjacency_eigenvalues.size()));
  }
  const long long padding2 = static_cast<long long>(n) * (d - 2);
  if (padding2 < 0 || padding2 % 2 != 0) {
    throw std::invalid_argument("n(d-2)/2 must be a non-negative integer (n = " + std::to_string(n) +
                                ", d = " + std::to_string(d) + ")");
  }
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  const double q = d - 1.0;
  for (double lambda : adjacency_eigenvalues) {
    const double disc = lambda * lambda - 4.0 * q;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double big = lambda >= 0.0 ? (lambda + root) / 2.0 : (lambda - root) / 2.0;
      // Product of the roots is d-1; avoids cancellation in the small root.
      const double small = big != 0.0 ? q / big : (lambda - root) / 2.0;
      out.emplace_back(big, 0.0);
      out.emplace_back(small, 0.0);
    } else {
      const double im = std::sqrt(-disc) / 2.0;
      out.emplace_back(lambda / 2.0, im);
      out.emplace_back(lambda / 2.0, -im);
    }
  }
  const long long padding = padding2 / 2;
  for (long long i = 0; i < padding; ++i) out.emplace_back(1.0, 0.0);
  for (long long i = 0; i < padding; ++i) out.emplace_back(-1.0, 0.0);
  return out;
}

double lambda_of(const std::vector<double>& adjacency_eigenvalues) {
  if (adjacency_eigenvalues.size() < 2) throw std::invalid_argument("lambda(G) needs n >= 2");
  return std::max(adjacency_eigenvalues[1], -adjacency_eigenvalues.back());
}

double mu_of(const std::vector<Complex>& hashimoto_eigenvalues, int d) {
  if (hashimoto_eigenvalues.size() < 2 * static_cast<std::size_t>(d) || hashimoto_eigenvalues.size() < 3) {
    throw std::invalid_argument("mu(G) needs n >= 2");
  }
  const Complex trivial(d - 1.0, 0.0);
  std::size_t skip = 0;
  for (std::size_t i = 1; i < hashimoto_eigenvalues.size(); ++i) {
    if (std::abs(hashimoto_eigenvalues[i] - trivial) < std::abs(hashimoto_eigenvalues[skip] - trivial)) skip = i;
  }
  double mu = 0.0;
  for (std::size_t i = 0; i < hashimoto_eigenvalues.size(); ++i) {
    if (i != skip) mu = std::max(mu, std::abs(hashimoto_eigenvalues[i]));
  }
  return mu;
}

SpectrumReport spectrum_report(const RegularGraph& g, const EigenOptions& options) {
  SpectrumReport r;
  r.n = g.n();
  r.d = g.d();
  r.connected = g.connected();
  r.adjacency_eigenvalues = adjacency_spectrum(g, options);
  r.hashimoto_eigenvalues = hashimoto_from_adjacency(r.adjacency_eigenvalues, g.n(), g.d());
  if (g.n() >= 2) {
    r.lambda = lambda_of(r.adjacency_eigenvalues);
    r.mu = mu_of(r.hashimoto_eigenvalues, g.d());
  }
  return r;
}

bool lambda_mu_relation_check(double lambda, double mu, int d, double branch_tol, double identity_tol) {
  const double q = d - 1.0;
  if (!(mu > std::sqrt(q) + branch_tol)) return true;
  return std::fabs(lambda - (mu + q / mu)) <= identity_tol;
}

bool lambda_mu_relation_check(double lambda, double mu, int d, double tol) {
  return lambda_mu_relation_check(lambda, mu, d, tol, tol);
}

bool lambda_mu_relation_check(const SpectrumReport& report, double tol) {
  if (report.n < 2) throw std::invalid_argument("lambda-mu relation needs n >= 2");
  return lambda_mu_relation_check(report.lambda, report.mu, report.d, tol);
}

Complex power_sum(const std::vector<Complex>& values, int t) {
  std::complex<long double> total = 0.0L;
  for (const auto& v : values) {
    const std::complex<long double> z(v.real(), v.imag());
    std::complex<long double> p = 1.0L;
    for (int i = 0; i < t; ++i) p *= z;
    total += p;
  }
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

bool IharaBassReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const TraceRow& r) { return r.ok && r.split_ok; });
}

IharaBassReport verify_ihara_bass(const RegularGraph& g, int t_max, double tol, const EigenOptions& options) {
  if (t_max < 1) throw std::invalid_argument("verify_ihara_bass needs t_max >= 1");
  const int n = g.n();
  const int d = g.d();
  const auto eigenvalues = adjacency_spectrum(g, options);
  const auto mus = hashimoto_from_adjacency(eigenvalues, n, d);
  // Roots of lambda_2..lambda_n sit at positions 2..2n-1.
  const std::vector<Complex> nontrivial(mus.begin() + 2, mus.begin() + 2 * n);

  IharaBassReport report;
  for (int t = 1; t <= t_max; ++t) {
    TraceRow row;
    row.t = t;
    row.walk_count = nb_walk_count(g, t);
    row.dictionary_sum = power_sum(mus, t);
    const double scale = std::max(1.0, std::pow(d - 1.0, t));
    row.abs_error = std::abs(Complex(static_cast<double>(row.walk_count), 0.0) - row.dictionary_sum);
    row.ok = row.abs_error <= tol * scale;
    if (t % 2 == 0 && d % 2 == 0) {
      row.split_checked = true;
      row.split_lhs = static_cast<double>(row.walk_count) - std::pow(d - 1.0, t) -
                      (static_cast<double>(n) * (d - 2) + 1.0);
      row.split_rhs = power_sum(nontrivial, t).real();
      row.split_ok = std::fabs(row.split_lhs - row.split_rhs) <= tol * scale;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace nbtrace
