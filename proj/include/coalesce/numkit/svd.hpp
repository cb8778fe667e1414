#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "coalesce/numkit/matrix.hpp"

namespace coalesce::numkit {

/// Thin SVD of a column stack A (rows x cols): A V = U diag(sigma).
/// Singular values are sorted descending; `left` holds the normalised columns
/// of A V (zero columns where sigma == 0), `right` the columns of V.
struct ColumnSvd {
  std::vector<double> sigma;
  std::vector<CVector> left;
  std::vector<CVector> right;
};

/// One-sided (Hestenes) Jacobi SVD. Accurate to high relative precision in the
/// small singular values, which is what rank decisions and null vectors need.
inline ColumnSvd jacobi_svd(std::vector<CVector> cols) {
  const std::size_t m = cols.size();
  ColumnSvd out;
  if (m == 0) return out;
  const std::size_t n = cols.front().size();
  for (const auto& c : cols)
    if (c.size() != n) throw DimensionMismatch("jacobi_svd: columns of unequal length");

  std::vector<CVector> v(m, CVector(m));
  for (std::size_t i = 0; i < m; ++i) v[i][i] = 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{};
        for (std::size_t k = 0; k < n; ++k) {
          alpha += std::norm(cols[p][k]);
          beta += std::norm(cols[q][k]);
          gamma += std::conj(cols[p][k]) * cols[q][k];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Rotate column q by the phase of gamma so the pair problem is real.
        const cplx phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx ap = cols[p][k];
          const cplx aq = cols[q][k] * phase;
          cols[p][k] = c * ap - s * aq;
          cols[q][k] = s * ap + c * aq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const cplx vp = v[p][k];
          const cplx vq = v[q][k] * phase;
          v[p][k] = c * vp - s * vq;
          v[q][k] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(m);
  for (std::size_t i = 0; i < m; ++i) sig[i] = norm2(cols[i]);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sig[a] > sig[b]; });
  for (std::size_t idx : order) {
    out.sigma.push_back(sig[idx]);
    CVector u = cols[idx];
    if (sig[idx] > 0.0)
      for (auto& x : u) x /= sig[idx];
    out.left.push_back(std::move(u));
    out.right.push_back(std::move(v[idx]));
  }
  return out;
}

inline std::vector<double> singular_values(std::vector<CVector> cols) {
  return jacobi_svd(std::move(cols)).sigma;
}

/// Number of singular values above tol * (largest singular value).
inline std::size_t numerical_rank(const std::vector<CVector>& vectors, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numerical_rank: tol must be > 0");
  if (vectors.empty()) return 0;
  const auto sig = singular_values(vectors);
  if (sig.front() == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(
      sig.begin(), sig.end(), [&](double s) { return s > tol * sig.front(); }));
}

/// Orthonormal basis of the numerical span (singular values > tol * max).
inline std::vector<CVector> orthonormal_span(const std::vector<CVector>& vectors, double tol) {
  std::vector<CVector> basis;
  if (vectors.empty()) return basis;
  auto svd = jacobi_svd(vectors);
  if (svd.sigma.front() == 0.0) return basis;
  for (std::size_t i = 0; i < svd.sigma.size(); ++i)
    if (svd.sigma[i] > tol * svd.sigma.front()) basis.push_back(std::move(svd.left[i]));
  return basis;
}

/// Columns of a dense matrix, as a column stack.
inline std::vector<CVector> columns_of(const ComplexMatrix& a) {
  std::vector<CVector> cols(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) cols[j] = a.column(j);
  return cols;
}

/// Right singular vector of the smallest singular value, unit norm.
inline CVector smallest_right_singular_vector(const ComplexMatrix& a) {
  auto svd = jacobi_svd(columns_of(a));
  return normalized(std::move(svd.right.back()));
}

}  // namespace coalesce::numkit
