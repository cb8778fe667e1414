#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "coalesce/numkit/matrix.hpp"

namespace coalesce::numkit {

/// Residual acceptance used by the invariants: ||H v - lambda v|| <= kEigTol * max(1, ||H||_F).
inline constexpr double kEigTol = 1e-10;
/// QR sweep budget is kSweepsPerRow * dim.
inline constexpr long kSweepsPerRow = 30;

/// A = Q T Q^H with T upper triangular.
struct SchurForm {
  ComplexMatrix t;
  ComplexMatrix q;
  long sweeps = 0;
};

namespace detail {

// Rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s{};

  static Givens zeroing(cplx a, cplx b) {
    Givens g;
    const double aa = std::abs(a), ab = std::abs(b);
    if (ab == 0.0) return g;
    const double nrm = std::hypot(aa, ab);
    if (aa == 0.0) {
      g.c = 0.0;
      g.s = std::conj(b) / ab;
    } else {
      g.c = aa / nrm;
      g.s = (a / aa) * std::conj(b) / nrm;
    }
    return g;
  }

  // rows i, i+1 of m, columns [col_begin, dim)
  void apply_left(ComplexMatrix& m, std::size_t i, std::size_t col_begin) const {
    for (std::size_t j = col_begin; j < m.dim(); ++j) {
      const cplx x = m(i, j), y = m(i + 1, j);
      m(i, j) = c * x + s * y;
      m(i + 1, j) = -std::conj(s) * x + c * y;
    }
  }

  // columns i, i+1 of m multiplied by G^H, rows [0, row_end]
  void apply_right_adjoint(ComplexMatrix& m, std::size_t i, std::size_t row_end) const {
    for (std::size_t r = 0; r <= row_end; ++r) {
      const cplx x = m(r, i), y = m(r, i + 1);
      m(r, i) = x * c + y * std::conj(s);
      m(r, i + 1) = -x * s + y * c;
    }
  }
};

inline double norm1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Householder reduction to upper Hessenberg form; accumulates Q.
inline void reduce_to_hessenberg(ComplexMatrix& a, ComplexMatrix& q) {
  const std::size_t n = a.dim();
  if (n < 3) return;
  CVector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm = std::hypot(xnorm, std::abs(a(i, k)));
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail = std::max(tail, std::abs(a(i, k)));
    if (tail == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
    const cplx alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), cplx{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vn = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    vn = std::sqrt(vn);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    // A <- P A P with P = I - 2 v v^H
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      cplx s{};
      for (std::size_t i = k + 1; i < n; ++i) s += a(r, i) * v[i];
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(r, i) -= s * std::conj(v[i]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      cplx s{};
      for (std::size_t i = k + 1; i < n; ++i) s += q(r, i) * v[i];
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) q(r, i) -= s * std::conj(v[i]);
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

inline bool negligible_subdiagonal(ComplexMatrix& t, std::size_t i) {
  const double d = norm1(t(i, i)) + norm1(t(i + 1, i + 1));
  const double sd = norm1(t(i + 1, i));
  if (sd <= std::numeric_limits<double>::epsilon() * d || sd == 0.0) {
    t(i + 1, i) = 0.0;
    return true;
  }
  return false;
}

// Wilkinson shift from the trailing 2x2 block; ad hoc shifts at iterations 10 and 20.
inline cplx wilkinson_shift(const ComplexMatrix& t, std::size_t iu, long iter) {
  if (iter == 10 || iter == 20) {
    double s = std::abs(t(iu, iu - 1).real());
    if (iu >= 2) s += std::abs(t(iu - 1, iu - 2).real());
    return t(iu, iu) + s;
  }
  cplx a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
  const double normt = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  if (normt == 0.0) return 0.0;
  a /= normt;
  b /= normt;
  c /= normt;
  d /= normt;
  const cplx bc = b * c;
  const cplx diff = a - d;
  const cplx disc = std::sqrt(diff * diff + 4.0 * bc);
  const cplx det = a * d - bc;
  const cplx tr = a + d;
  cplx e1 = (tr + disc) / 2.0;
  cplx e2 = (tr - disc) / 2.0;
  if (norm1(e1) > norm1(e2))
    e2 = det / e1;
  else if (norm1(e2) != 0.0)
    e1 = det / e2;
  return normt * (norm1(e1 - d) < norm1(e2 - d) ? e1 : e2);
}

}  // namespace detail

/// Complex Schur decomposition by Hessenberg reduction and implicitly shifted QR.
inline SchurForm schur(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) throw InvalidSpec("schur: empty matrix");
  if (!a.all_finite()) throw InvalidSpec("schur: matrix has non-finite entries");
  SchurForm s{a, ComplexMatrix::identity(n), 0};
  detail::reduce_to_hessenberg(s.t, s.q);
  if (n == 1) return s;

  ComplexMatrix& t = s.t;
  const long max_sweeps = kSweepsPerRow * static_cast<long>(n);
  std::size_t iu = n - 1;
  long iter = 0;
  while (true) {
    while (iu > 0 && detail::negligible_subdiagonal(t, iu - 1)) {
      iter = 0;
      --iu;
    }
    if (iu == 0) break;
    ++iter;
    if (++s.sweeps > max_sweeps)
      throw ConvergenceFailure("schur: QR iteration did not converge (||A||_F = " +
                                   std::to_string(a.frobenius_norm()) + ", " +
                                   std::to_string(s.sweeps - 1) + " sweeps)",
                               a.frobenius_norm(), s.sweeps - 1);
    std::size_t il = iu - 1;
    while (il > 0 && !detail::negligible_subdiagonal(t, il - 1)) --il;

    const cplx shift = detail::wilkinson_shift(t, iu, iter);
    auto g = detail::Givens::zeroing(t(il, il) - shift, t(il + 1, il));
    g.apply_left(t, il, il);
    g.apply_right_adjoint(t, il, std::min(il + 2, iu));
    g.apply_right_adjoint(s.q, il, n - 1);
    for (std::size_t i = il + 1; i < iu; ++i) {
      g = detail::Givens::zeroing(t(i, i - 1), t(i + 1, i - 1));
      g.apply_left(t, i, i - 1);
      t(i + 1, i - 1) = 0.0;
      g.apply_right_adjoint(t, i, std::min(i + 2, iu));
      g.apply_right_adjoint(s.q, i, n - 1);
    }
  }
  return s;
}

namespace detail {

// Right eigenvectors of the triangular factor by back-substitution. Tiny
// denominators are clamped to eps*||T||_F; inside a defective cluster this makes
// the vectors (nearly) parallel, which is how defectiveness shows up downstream.
inline std::vector<CVector> triangular_eigenvectors(const ComplexMatrix& t) {
  const std::size_t n = t.dim();
  const double smin = std::max(std::numeric_limits<double>::epsilon() * t.frobenius_norm(),
                               std::numeric_limits<double>::min());
  constexpr double big = 1e150;
  std::vector<CVector> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    CVector x(n);
    x[k] = 1.0;
    const cplx lambda = t(k, k);
    for (std::size_t ii = k; ii-- > 0;) {
      cplx s{};
      for (std::size_t j = ii + 1; j <= k; ++j) s += t(ii, j) * x[j];
      cplx d = t(ii, ii) - lambda;
      if (std::abs(d) < smin) d = smin;
      x[ii] = -s / d;
      if (std::abs(x[ii]) > big) {
        const double sc = 1.0 / std::abs(x[ii]);
        for (std::size_t j = ii; j <= k; ++j) x[j] *= sc;
      }
    }
    out[k] = std::move(x);
  }
  return out;
}

struct RawEigen {
  CVector values;
  std::vector<CVector> vectors;
};

inline RawEigen right_eigen(const ComplexMatrix& a) {
  const SchurForm s = schur(a);
  const std::size_t n = a.dim();
  RawEigen r;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.values[i] = s.t(i, i);
  const auto xs = triangular_eigenvectors(s.t);
  r.vectors.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j <= k; ++j) acc += s.q(i, j) * xs[k][j];
      v[i] = acc;
    }
    r.vectors[k] = normalized(std::move(v));
  }
  return r;
}

}  // namespace detail

/// All eigenpairs of H with matched left eigenvectors (right eigenvectors of H^H).
struct EigenSystem {
  CVector eigenvalues;
  std::vector<CVector> right_vectors;
  std::vector<CVector> left_vectors;
  std::vector<double> right_residuals;
  std::vector<double> left_residuals;
  double matrix_norm = 0.0;  // Frobenius

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  double residual_scale() const { return std::max(1.0, matrix_norm); }
};

/// Orders eigenvalues by real part, then imaginary part.
inline bool eigenvalue_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline EigenSystem eig_full(const ComplexMatrix& h) {
  if (h.dim() == 0) throw InvalidSpec("eig_full: dim must be >= 1");
  if (!h.all_finite()) throw InvalidSpec("eig_full: matrix has non-finite entries");
  const std::size_t n = h.dim();
  const ComplexMatrix hd = h.adjoint();
  const auto right = detail::right_eigen(h);
  const auto left = detail::right_eigen(hd);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eigenvalue_less(right.values[a], right.values[b]);
  });

  EigenSystem es;
  es.matrix_norm = h.frobenius_norm();
  std::vector<bool> used(n, false);
  for (std::size_t idx : order) {
    const cplx lambda = right.values[idx];
    // greedy match of conj(lambda) among the adjoint's eigenvalues
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(left.values[j] - std::conj(lambda));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    es.eigenvalues.push_back(lambda);
    es.right_vectors.push_back(right.vectors[idx]);
    es.left_vectors.push_back(left.vectors[best]);
    es.right_residuals.push_back(distance(h * right.vectors[idx], scaled(lambda, right.vectors[idx])));
    es.left_residuals.push_back(
        distance(hd * left.vectors[best], scaled(std::conj(lambda), left.vectors[best])));
  }
  return es;
}

}  // namespace coalesce::numkit
