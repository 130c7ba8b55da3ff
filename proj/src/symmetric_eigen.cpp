#include "nbtrace/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace nbtrace {

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

namespace {

std::uint64_t rotation_budget(std::size_t n, const EigenOptions& options) {
  if (options.max_rotations > 0) return options.max_rotations;
  return std::max<std::uint64_t>(100, 100 * static_cast<std::uint64_t>(n) * n);
}

// On exit diag holds the diagonal and sub[i] couples i and i+1 (sub[n-1] = 0).
void tridiagonalize(SymmetricMatrix& a, std::vector<double>& diag, std::vector<double>& sub) {
  const std::size_t n = a.size();
  diag.assign(n, 0.0);
  sub.assign(n, 0.0);
  std::vector<double> v(n);
  std::vector<double> p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      norm2 += v[i] * v[i];
    }
    diag[k] = a(k, k);
    double alpha = std::sqrt(norm2);
    if (alpha == 0.0) {
      sub[k] = 0.0;
      continue;
    }
    if (v[0] > 0) alpha = -alpha;
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) vnorm2 += v[i] * v[i];
    sub[k] = alpha;
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    double pv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* r = a.row(k + 1 + i) + (k + 1);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += r[j] * v[j];
      p[i] = beta * s;
      pv += p[i] * v[i];
    }
    const double kk = 0.5 * beta * pv;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kk * v[i];  // p becomes w
    for (std::size_t i = 0; i < m; ++i) {
      double* r = a.row(k + 1 + i) + (k + 1);
      const double vi = v[i];
      const double wi = p[i];
      for (std::size_t j = 0; j < m; ++j) r[j] -= vi * p[j] + wi * v[j];
    }
  }
  if (n >= 2) {
    diag[n - 2] = a(n - 2, n - 2);
    sub[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) diag[n - 1] = a(n - 1, n - 1);
}

void implicit_ql(std::vector<double>& d, std::vector<double>& e, std::uint64_t budget) {
  const std::size_t n = d.size();
  const double eps = std::numeric_limits<double>::epsilon();
  std::uint64_t rotations = 0;
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        if (++rotations > budget) {
          double residual = 0.0;
          for (double x : e) residual = std::max(residual, std::fabs(x));
          throw EigenSolverError("QL iteration exceeded its rotation budget", residual);
        }
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(SymmetricMatrix a, const EigenOptions& options) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  std::vector<double> diag;
  std::vector<double> sub;
  tridiagonalize(a, diag, sub);
  implicit_ql(diag, sub, rotation_budget(n, options));
  std::sort(diag.begin(), diag.end(), std::greater<>());
  return diag;
}

EigenSystem jacobi_eigensystem(SymmetricMatrix a, const EigenOptions& options) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;  // v[row][col]
  const double scale = a.frobenius_norm();
  const std::uint64_t budget = rotation_budget(n, options);
  std::uint64_t rotations = 0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  while (true) {
    const double off = off_norm();
    if (off <= options.tolerance * scale || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= std::numeric_limits<double>::min()) continue;
        if (++rotations > budget) throw EigenSolverError("Jacobi sweeps exceeded their rotation budget", off);
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = c * arq + s * arp;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[r][p];
          const double vrq = v[r][q];
          v[r][p] = c * vrp - s * vrq;
          v[r][q] = c * vrq + s * vrp;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  EigenSystem out;
  for (std::size_t idx : order) {
    out.values.push_back(a(idx, idx));
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v[r][idx];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

}  // namespace nbtrace
