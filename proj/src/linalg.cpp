#include "seqmine/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqmine/errors.hpp"

namespace seqmine {

Matrix covariance_matrix(const Matrix& x) {
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  if (n == 0) throw TooFewLearners("covariance: empty matrix");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x.at(i, j);
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);

  Matrix cov(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      const double da = x.at(i, a) - mean[a];
      for (std::size_t b = a; b < d; ++b) {
        cov.at(a, b) += da * (x.at(i, b) - mean[b]);
      }
    }
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      cov.at(a, b) /= static_cast<double>(n);
      cov.at(b, a) = cov.at(a, b);
    }
  return cov;
}

namespace {

double max_off_diagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j) m = std::max(m, std::fabs(a.at(i, j)));
  return m;
}

}  // namespace

EigenDecomposition jacobi_eigen_symmetric(const Matrix& input, double tol, int max_sweeps) {
  if (input.rows != input.cols) throw DimensionMismatch("jacobi: matrix not square");
  const std::size_t n = input.rows;

  Matrix a = input;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

  int sweep = 0;
  while (max_off_diagonal(a) > tol) {
    if (++sweep > max_sweeps) throw NumericalFailure("jacobi: no convergence");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::fabs(apq) <= tol * 1e-3) continue;
        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        // Smaller-magnitude root of t^2 + 2*theta*t - 1 = 0.
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a.at(i, i) > a.at(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t src = order[r];
    out.values[r] = a.at(src, src);
    for (std::size_t k = 0; k < n; ++k) out.vectors.at(r, k) = v.at(k, src);
  }
  return out;
}

}  // namespace seqmine
