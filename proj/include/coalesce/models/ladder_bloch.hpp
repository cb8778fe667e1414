#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "coalesce/numkit/matrix.hpp"

namespace coalesce::models {

/// Number of terms kept in the Delta_k sine series; `infinite()` selects the
/// step-function limit (J pi / 4) sgn(k).
class SeriesCutoff {
 public:
  static SeriesCutoff terms(int n) { return SeriesCutoff(n); }
  static SeriesCutoff infinite() { return SeriesCutoff(std::nullopt); }

  bool is_infinite() const noexcept { return !terms_.has_value(); }
  int count() const { return terms_.value(); }

 private:
  explicit SeriesCutoff(std::optional<int> n) : terms_(n) {}
  std::optional<int> terms_;
};

struct BlochBlock {
  numkit::ComplexMatrix h;  // 2x2
  double delta = 0.0;
  numkit::cplx eps_plus;
  numkit::cplx eps_minus;

  double gap() const { return std::abs(eps_plus - eps_minus); }
};

/// Delta_k = J sum_{n=1}^{n_max} sin((2n-1)k)/(2n-1), or (J pi/4) sgn(k).
inline double ladder_delta(double k, double j_coupling, SeriesCutoff cutoff) {
  if (cutoff.is_infinite()) {
    const double sgn = (k > 0.0) - (k < 0.0);
    return j_coupling * std::numbers::pi / 4.0 * sgn;
  }
  double s = 0.0;
  for (int n = 1; n <= cutoff.count(); ++n) s += std::sin((2 * n - 1) * k) / (2 * n - 1);
  return j_coupling * s;
}

/// h_k = [[0, 1 - Delta], [1 + Delta, 0]] + 2 cos k, eigenvalues 2 cos k +/- sqrt(1 - Delta^2).
inline BlochBlock ladder_bloch(double k, double j_coupling, SeriesCutoff cutoff) {
  BlochBlock b;
  b.delta = ladder_delta(k, j_coupling, cutoff);
  const double diag = 2.0 * std::cos(k);
  b.h = numkit::ComplexMatrix{{diag, 1.0 - b.delta}, {1.0 + b.delta, diag}};
  // (1 - D)(1 + D) keeps the radicand exact at |D| = 1
  const auto root = std::sqrt(numkit::cplx{(1.0 - b.delta) * (1.0 + b.delta)});
  b.eps_plus = diag + root;
  b.eps_minus = diag - root;
  return b;
}

}  // namespace coalesce::models
