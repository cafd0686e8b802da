#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "schatten_lab/error.hpp"
#include "schatten_lab/matrix.hpp"

namespace schatten_lab {

/// Square matrix with A = A* up to tolerance; stored symmetrized.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& a, const Tolerances& tol = {}) : m_(a) {
    if (!a.is_square()) throw LabError(ErrorCode::NotHermitian, "matrix is not square");
    const std::size_t n = a.rows();
    const double bound = tol.hermitian * (1.0 + a.max_abs());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const Complex aij = a(i, j);
        const Complex aji = a(j, i);
        if (std::abs(aij - std::conj(aji)) > bound) {
          std::ostringstream os;
          os << "asymmetry " << std::abs(aij - std::conj(aji)) << " at (" << i << "," << j << ")";
          throw LabError(ErrorCode::NotHermitian, os.str());
        }
        const Complex avg = 0.5 * (aij + std::conj(aji));
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  ComplexMatrix m_;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, unitary

  /// V diag(f(lambda)) V*.
  template <class F>
  ComplexMatrix reconstruct(F&& f) const {
    const std::size_t n = eigenvalues.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = f(eigenvalues[k]);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const Complex vik = w * eigenvectors(i, k);
        for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eigenvectors(j, k));
      }
    }
    return out;
  }

  ComplexMatrix reconstruct() const {
    return reconstruct([](double x) { return x; });
  }
};

namespace detail {

inline double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

struct JacobiResult {
  std::vector<double> values;
  std::optional<ComplexMatrix> vectors;
};

// Cyclic complex Jacobi. Each rotation zeroes one off-diagonal pair.
inline JacobiResult jacobi(const ComplexMatrix& input, bool want_vectors, int max_sweeps = 100) {
  const std::size_t n = input.rows();
  ComplexMatrix a = input;
  std::optional<ComplexMatrix> v;
  if (want_vectors) v = ComplexMatrix::identity(n);

  const double total = std::max(input.frobenius_norm(), 1e-300);
  const double target = std::pow(1e-16 * total, 2);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
            std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / r;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * r);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U on (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v) {
          ComplexMatrix& vm = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = vm(k, p);
            const Complex vkq = vm(k, q);
            vm(k, p) = vkp * upp + vkq * uqp;
            vm(k, q) = vkp * upq + vkq * uqq;
          }
        }
      }
    }
  }
  const double residual = std::sqrt(off_diagonal_norm2(a));
  if (residual > 1e-12 * total) {
    std::ostringstream os;
    os << "Jacobi did not converge after " << sweep << " sweeps, off-diagonal residual " << residual;
    throw LabError(ErrorCode::NoConvergence, os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  JacobiResult out;
  out.values.reserve(n);
  for (std::size_t i : order) out.values.push_back(a(i, i).real());
  if (v) {
    ComplexMatrix sorted(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) sorted(r, c) = (*v)(r, order[c]);
    out.vectors = std::move(sorted);
  }
  return out;
}

}  // namespace detail

/// Full eigendecomposition, eigenvalues descending.
inline Spectrum hermitian_eig(const HermitianMatrix& a) {
  auto r = detail::jacobi(a.matrix(), true);
  return Spectrum{std::move(r.values), std::move(*r.vectors)};
}

/// Eigenvalues only (descending); skips the eigenvector accumulation.
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a) {
  return detail::jacobi(a.matrix(), false).values;
}

/// Positive semidefinite matrix with a cached, clipped spectrum.
class PsdMatrix {
 public:
  explicit PsdMatrix(const HermitianMatrix& a, const Tolerances& tol = {})
      : h_(a), spectrum_(hermitian_eig(a)) {
    auto& ev = spectrum_.eigenvalues;
    const double op = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const double floor = -tol.psd * std::max(1.0, op);
    if (ev.back() < floor) {
      std::ostringstream os;
      os << "minimum eigenvalue " << ev.back() << " below " << floor;
      throw LabError(ErrorCode::NotPsd, os.str());
    }
    for (double& x : ev) x = std::max(x, 0.0);
  }

  explicit PsdMatrix(const ComplexMatrix& a, const Tolerances& tol = {})
      : PsdMatrix(HermitianMatrix(a, tol), tol) {}

  std::size_t dim() const noexcept { return h_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const Spectrum& spectrum() const noexcept { return spectrum_; }
  const std::vector<double>& eigenvalues() const noexcept { return spectrum_.eigenvalues; }
  double operator_norm() const noexcept { return spectrum_.eigenvalues.front(); }

 private:
  HermitianMatrix h_;
  Spectrum spectrum_;
};

}  // namespace schatten_lab
