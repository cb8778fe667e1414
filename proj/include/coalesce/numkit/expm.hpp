#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "coalesce/numkit/matrix.hpp"

namespace coalesce::numkit {

/// Solves A X = B by LU with partial pivoting (A, B square of the same dim).
inline ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) throw DimensionMismatch("lu_solve: dim mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == cplx{}) throw std::domain_error("lu_solve: singular matrix");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(b(k, j), b(piv, j));
      }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx{}) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < n; ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = b(kk, j);
      for (std::size_t i = kk + 1; i < n; ++i) s -= a(kk, i) * b(i, j);
      b(kk, j) = s / a(kk, kk);
    }
  return b;
}

/// Matrix exponential, Pade(13) with scaling and squaring.
inline ComplexMatrix expm(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  constexpr std::array<double, 14> b = {64764752532480000.0, 32382376266240000.0,
                                        7771770303897600.0,  1187353796428800.0,
                                        129060195264000.0,   10559470521600.0,
                                        670442572800.0,      33522128640.0,
                                        1323241920.0,        40840800.0,
                                        960960.0,            16380.0,
                                        182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const double nrm = a.norm1();
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  const ComplexMatrix as = a * cplx{std::ldexp(1.0, -s)};
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                          b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = as * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                          b[4] * a4 + b[2] * a2 + b[0] * id;
  ComplexMatrix r = lu_solve(v - u, v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

}  // namespace coalesce::numkit
