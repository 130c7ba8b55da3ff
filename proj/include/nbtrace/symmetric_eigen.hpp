#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nbtrace {

// Dense symmetric matrix, row-major.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  template <class T>
  static SymmetricMatrix from_row_major(std::size_t n, const std::vector<T>& values) {
    if (values.size() != n * n) throw std::invalid_argument("matrix data size mismatch");
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < values.size(); ++i) m.data_[i] = static_cast<double>(values[i]);
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double* row(std::size_t i) { return data_.data() + i * n_; }
  const double* row(std::size_t i) const { return data_.data() + i * n_; }
  double frobenius_norm() const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct EigenOptions {
  double tolerance = 1e-10;
  // Rotation budget; 0 means 100 n^2.
  std::uint64_t max_rotations = 0;
};

class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Householder reduction to tridiagonal form followed by implicit QL with
// Wilkinson shifts (Givens rotations). Eigenvalues only, descending.
std::vector<double> symmetric_eigenvalues(SymmetricMatrix a, const EigenOptions& options = {});

struct EigenSystem {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i], unit length
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
// tolerance * ||A||_F.
EigenSystem jacobi_eigensystem(SymmetricMatrix a, const EigenOptions& options = {});

}  // namespace nbtrace
