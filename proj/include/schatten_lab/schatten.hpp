#pragma once

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <string>
#include <vector>

#include "schatten_lab/error.hpp"
#include "schatten_lab/matrix.hpp"
#include "schatten_lab/spectral.hpp"

namespace schatten_lab {

/// Exponent p in [1, inf]. Infinity is a distinct state, never a large float.
class SchattenExponent {
 public:
  explicit SchattenExponent(double p) : value_(p), infinite_(false) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw LabError(ErrorCode::OutOfRange, "Schatten exponent must be a finite real >= 1, got " + std::to_string(p));
    }
  }

  static SchattenExponent infinity() { return SchattenExponent(); }

  bool is_infinite() const noexcept { return infinite_; }

  /// Finite value; throws for p = inf.
  double value() const {
    if (infinite_) throw LabError(ErrorCode::OutOfRange, "exponent is infinite");
    return value_;
  }

  /// Finite value or +inf, for ordering and display only.
  double as_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  std::string to_string() const;

  friend bool operator==(const SchattenExponent& a, const SchattenExponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  SchattenExponent() : value_(0.0), infinite_(true) {}

  double value_;
  bool infinite_;
};

inline std::string SchattenExponent::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

/// q with 1/p + 1/q = 1.
inline SchattenExponent conjugate_exponent(const SchattenExponent& p) {
  if (p.is_infinite()) return SchattenExponent(1.0);
  const double v = p.value();
  if (v == 1.0) return SchattenExponent::infinity();
  return SchattenExponent(v / (v - 1.0));
}

/// Singular values, descending. Hermitian inputs use |eigenvalues| directly;
/// everything else goes through the eigenvalues of A*A.
inline std::vector<double> singular_values(const ComplexMatrix& a) {
  std::vector<double> s;
  bool hermitian = a.is_square();
  if (hermitian) {
    for (std::size_t i = 0; i < a.rows() && hermitian; ++i)
      for (std::size_t j = i; j < a.cols(); ++j)
        if (a(i, j) != std::conj(a(j, i))) {
          hermitian = false;
          break;
        }
  }
  if (hermitian) {
    s = hermitian_eigenvalues(HermitianMatrix(a));
    for (double& x : s) x = std::abs(x);
  } else {
    // scale to unit max entry so that squaring cannot under- or overflow
    const double top = a.max_abs();
    if (top == 0.0) return std::vector<double>(std::min(a.rows(), a.cols()), 0.0);
    const ComplexMatrix scaled = a * (1.0 / top);
    const ComplexMatrix g = a.rows() >= a.cols() ? gram(scaled) : gram(scaled.adjoint());
    s = hermitian_eigenvalues(HermitianMatrix(g));
    for (double& x : s) x = top * std::sqrt(std::max(x, 0.0));
  }
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

/// (sum s_i^p)^(1/p), or max s_i for p = inf, computed with max-scaling.
inline double norm_from_singular_values(const std::vector<double>& s, const SchattenExponent& p) {
  double top = 0.0;
  for (double x : s) top = std::max(top, std::abs(x));
  if (p.is_infinite() || top == 0.0) return top;
  const double pv = p.value();
  double acc = 0.0;
  for (double x : s) acc += std::pow(std::abs(x) / top, pv);
  return top * std::pow(acc, 1.0 / pv);
}

inline double schatten_norm(const ComplexMatrix& a, const SchattenExponent& p) {
  return norm_from_singular_values(singular_values(a), p);
}

inline double schatten_norm(const PsdMatrix& a, const SchattenExponent& p) {
  return norm_from_singular_values(a.eigenvalues(), p);
}

/// Tr |A|^p = sum of s_i^p.
inline double trace_abs_power(const ComplexMatrix& a, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw LabError(ErrorCode::OutOfRange, "trace_abs_power needs finite p >= 1");
  double acc = 0.0;
  for (double x : singular_values(a)) acc += std::pow(x, p);
  return acc;
}

/// V diag(lambda^s) V*, with 0^s = 0 for s > 0.
inline PsdMatrix psd_power(const PsdMatrix& a, double s) {
  const auto& ev = a.eigenvalues();
  if (!std::isfinite(s)) throw LabError(ErrorCode::InvalidArgument, "power must be finite");
  if (s < 0.0) {
    const double op = a.operator_norm();
    if (!(ev.back() > 1e-12 * op)) {
      throw LabError(ErrorCode::NearSingular, "negative power of a near-singular matrix");
    }
  }
  if (s == 0.0) return PsdMatrix(ComplexMatrix::identity(a.dim()));
  const ComplexMatrix r = a.spectrum().reconstruct([s](double x) { return x > 0.0 ? std::pow(x, s) : 0.0; });
  return PsdMatrix(r);
}

/// Tr A^p for PSD A, the p-th power of the p-norm without the root.
inline double trace_power(const PsdMatrix& a, double p) {
  double acc = 0.0;
  for (double x : a.eigenvalues()) acc += std::pow(x, p);
  return acc;
}

}  // namespace schatten_lab
