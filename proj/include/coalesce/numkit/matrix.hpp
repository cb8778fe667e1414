#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "coalesce/error.hpp"

namespace coalesce::numkit {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Square dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
      : dim_(rows.size()), data_(rows.size() * rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) throw DimensionMismatch("ComplexMatrix: ragged initializer");
      std::size_t j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<const cplx> data() const noexcept { return data_; }

  CVector column(std::size_t j) const {
    CVector c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix a(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  // max column sum
  double norm1() const {
    double best = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) s += std::abs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same(b);
    const std::size_t n = a.dim_;
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend CVector operator*(const ComplexMatrix& a, std::span<const cplx> v) {
    if (v.size() != a.dim_)
      throw DimensionMismatch("matrix-vector product: matrix dim " + std::to_string(a.dim_) +
                              ", vector length " + std::to_string(v.size()));
    CVector out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < a.dim_; ++j) s += a(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same(const ComplexMatrix& o) const {
    if (o.dim_ != dim_)
      throw DimensionMismatch("matrix dims " + std::to_string(dim_) + " and " +
                              std::to_string(o.dim_));
  }

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

// ---- vector helpers -------------------------------------------------------

inline void require_same_length(std::span<const cplx> a, std::span<const cplx> b,
                                const char* what) {
  if (a.size() != b.size())
    throw DimensionMismatch(std::string(what) + ": lengths " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
}

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  require_same_length(a, b, "inner");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm2(std::span<const cplx> v) {
  // scaled to avoid overflow for the huge intermediate vectors of near-defective
  // back-substitution
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, std::max(std::abs(x.real()), std::abs(x.imag())));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x / scale);
  return scale * std::sqrt(s);
}

inline CVector normalized(CVector v) {
  const double n = norm2(v);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  for (auto& x : v) x /= n;
  return v;
}

inline CVector axpy(cplx alpha, std::span<const cplx> x, std::span<const cplx> y) {
  require_same_length(x, y, "axpy");
  CVector out(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

inline CVector scaled(cplx alpha, std::span<const cplx> x) {
  CVector out(x.begin(), x.end());
  for (auto& v : out) v *= alpha;
  return out;
}

inline double distance(std::span<const cplx> a, std::span<const cplx> b) {
  require_same_length(a, b, "distance");
  CVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm2(d);
}

/// min over global phases phi of || a e^{i phi} - b ||. Computed directly rather than
/// via sqrt(2 - 2|<a|b>|), which loses everything below ~1e-8.
inline double phase_aligned_distance(std::span<const cplx> a, std::span<const cplx> b) {
  const cplx ov = inner(a, b);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx{1.0};
  CVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] * phase - b[i];
  return norm2(d);
}

inline bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

}  // namespace coalesce::numkit
