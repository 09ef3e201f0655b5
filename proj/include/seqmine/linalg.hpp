#pragma once

#include <cstddef>
#include <vector>

namespace seqmine {

// Dense row-major matrix. Small sizes only (feature tables, covariances);
// nothing here is tuned for large n.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

// Population covariance (divide by n) of the column-centered input.
Matrix covariance_matrix(const Matrix& x);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // row i is the unit eigenvector for values[i]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps until the
// largest off-diagonal magnitude falls below tol; throws NumericalFailure if
// max_sweeps is exhausted first.
EigenDecomposition jacobi_eigen_symmetric(const Matrix& a, double tol = 1e-12,
                                          int max_sweeps = 100);

}  // namespace seqmine
