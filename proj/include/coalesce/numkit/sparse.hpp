#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "coalesce/numkit/matrix.hpp"

namespace coalesce::numkit {

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Coordinate-list operator. Duplicate (row, col) entries are summed, and
/// `apply` accumulates strictly in triplet order, so a fixed triplet list gives
/// bit-identical products.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw InvalidSpec("SparseOperator: dim must be >= 1");
  }

  static SparseOperator from_dense(const ComplexMatrix& m) {
    SparseOperator op(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j)
        if (m(i, j) != cplx{}) op.triplets_.push_back({i, j, m(i, j)});
    return op;
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Triplet>& triplets() const noexcept { return triplets_; }
  bool empty() const noexcept { return triplets_.empty(); }

  void add(std::size_t row, std::size_t col, cplx value) {
    if (row >= dim_ || col >= dim_)
      throw DimensionMismatch("SparseOperator::add: index (" + std::to_string(row) + ", " +
                              std::to_string(col) + ") outside dim " + std::to_string(dim_));
    triplets_.push_back({row, col, value});
  }

  /// Appends the Hermitian pair (row, col, v) and (col, row, conj v).
  void add_hermitian_pair(std::size_t row, std::size_t col, cplx value) {
    add(row, col, value);
    add(col, row, std::conj(value));
  }

  void append(const SparseOperator& other) {
    if (other.dim_ != dim_) throw DimensionMismatch("SparseOperator::append: dim mismatch");
    triplets_.insert(triplets_.end(), other.triplets_.begin(), other.triplets_.end());
  }

  ComplexMatrix to_dense() const {
    ComplexMatrix m(dim_);
    for (const auto& t : triplets_) m(t.row, t.col) += t.value;
    return m;
  }

  SparseOperator adjoint() const {
    SparseOperator a(dim_);
    a.triplets_.reserve(triplets_.size());
    for (const auto& t : triplets_) a.triplets_.push_back({t.col, t.row, std::conj(t.value)});
    return a;
  }

  SparseOperator scaled(cplx s) const {
    SparseOperator a = *this;
    for (auto& t : a.triplets_) t.value *= s;
    return a;
  }

  double norm1() const {
    if (dim_ == 0) return 0.0;
    std::vector<double> col(dim_, 0.0);
    for (const auto& t : triplets_) col[t.col] += std::abs(t.value);
    return *std::max_element(col.begin(), col.end());
  }

  double norm_inf() const {
    if (dim_ == 0) return 0.0;
    std::vector<double> row(dim_, 0.0);
    for (const auto& t : triplets_) row[t.row] += std::abs(t.value);
    return *std::max_element(row.begin(), row.end());
  }

  /// Upper bound on the spectral norm, sqrt(||A||_1 ||A||_inf).
  double spectral_norm_bound() const { return std::sqrt(norm1() * norm_inf()); }

  double frobenius_norm() const { return to_dense().frobenius_norm(); }

  /// y = A x, written into `out` (resized). `out` must not alias `x`.
  void apply_into(std::span<const cplx> x, CVector& out) const {
    if (x.size() != dim_)
      throw DimensionMismatch("apply: operator dim " + std::to_string(dim_) +
                              ", vector length " + std::to_string(x.size()));
    out.assign(dim_, cplx{});
    for (const auto& t : triplets_) out[t.row] += t.value * x[t.col];
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Triplet> triplets_;
};

inline CVector apply(const SparseOperator& op, std::span<const cplx> v) {
  CVector out;
  op.apply_into(v, out);
  return out;
}

}  // namespace coalesce::numkit
