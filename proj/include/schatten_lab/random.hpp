#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "schatten_lab/matrix.hpp"
#include "schatten_lab/spectral.hpp"

namespace schatten_lab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; mixes a base seed with a stream index so that
/// per-trial and per-restart generators are independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Entries (a + ib)/sqrt(2) with a, b i.i.d. N(0,1), so E|z|^2 = 1.
inline ComplexMatrix complex_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (Complex& z : g.entries()) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    z = Complex(re * s, im * s);
  }
  return g;
}

/// (G + G*)/2 for complex Gaussian G.
inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

/// scale * G G* / k for G of shape n x k. k < n gives rank-deficient samples.
inline ComplexMatrix wishart(std::size_t n, std::size_t k, Rng& rng, double scale = 1.0) {
  const ComplexMatrix g = complex_gaussian(n, k, rng);
  return (scale / static_cast<double>(k)) * (g * g.adjoint());
}

/// Haar unitary: modified Gram-Schmidt on the columns of a Gaussian matrix.
/// The implied R factor has a positive diagonal, so Q is Haar distributed.
inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix q = complex_gaussian(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

/// Uniformly random unit vector in C^d, as a d x 1 matrix.
inline ComplexMatrix random_unit_vector(std::size_t d, Rng& rng) {
  ComplexMatrix v = complex_gaussian(d, 1, rng);
  const double n = v.frobenius_norm();
  return v * (1.0 / n);
}

}  // namespace schatten_lab
