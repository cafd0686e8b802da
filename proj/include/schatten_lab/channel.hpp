#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "schatten_lab/error.hpp"
#include "schatten_lab/matrix.hpp"
#include "schatten_lab/random.hpp"
#include "schatten_lab/schatten.hpp"
#include "schatten_lab/spectral.hpp"

namespace schatten_lab {

/// Unit-trace PSD matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& rho, const Tolerances& tol = {}) : rho_(rho, tol) {
    const double tr = rho_.matrix().trace().real();
    if (std::abs(tr - 1.0) > tol.density_trace) {
      std::ostringstream os;
      os << "trace " << tr << " != 1";
      throw LabError(ErrorCode::NotDensityMatrix, os.str());
    }
  }

  /// |psi><psi| for a unit column vector psi.
  static DensityMatrix pure(const ComplexMatrix& psi) {
    if (psi.cols() != 1) throw LabError(ErrorCode::DimensionMismatch, "state vector must be a column");
    const double norm = psi.frobenius_norm();
    if (std::abs(norm - 1.0) > 1e-12) throw LabError(ErrorCode::NotDensityMatrix, "state vector is not normalized");
    return DensityMatrix(psi * psi.adjoint());
  }

  std::size_t dim() const noexcept { return rho_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
  const PsdMatrix& psd() const noexcept { return rho_; }
  const std::vector<double>& eigenvalues() const noexcept { return rho_.eigenvalues(); }

 private:
  PsdMatrix rho_;
};

/// Unit vector in C^d, stored as a d x 1 matrix.
class PureState {
 public:
  explicit PureState(ComplexMatrix v) : v_(std::move(v)) {
    if (v_.cols() != 1) throw LabError(ErrorCode::DimensionMismatch, "pure state must be a column vector");
    if (std::abs(v_.frobenius_norm() - 1.0) > 1e-12) {
      throw LabError(ErrorCode::InvalidArgument, "pure state must have unit norm");
    }
  }

  std::size_t dim() const noexcept { return v_.rows(); }
  const ComplexMatrix& vector() const noexcept { return v_; }
  DensityMatrix density() const { return DensityMatrix::pure(v_); }

 private:
  ComplexMatrix v_;
};

/// CPTP map rho -> sum K rho K*. Trace preservation is validated.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus, const Tolerances& tol = {}) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw LabError(ErrorCode::InvalidArgument, "need at least one Kraus operator");
    dim_out_ = kraus_.front().rows();
    dim_in_ = kraus_.front().cols();
    ComplexMatrix sum(dim_in_, dim_in_);
    for (const auto& k : kraus_) {
      if (k.rows() != dim_out_ || k.cols() != dim_in_) {
        throw LabError(ErrorCode::DimensionMismatch, "Kraus operators differ in shape");
      }
      sum += gram(k);
    }
    const double err = (sum - ComplexMatrix::identity(dim_in_)).frobenius_norm();
    if (err > tol.trace_preservation * static_cast<double>(dim_in_)) {
      std::ostringstream os;
      os << "||sum K*K - I||_F = " << err;
      throw LabError(ErrorCode::NotTracePreserving, os.str());
    }
  }

  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  /// Action on an arbitrary dim_in x dim_in matrix.
  ComplexMatrix act(const ComplexMatrix& rho) const {
    if (rho.rows() != dim_in_ || rho.cols() != dim_in_) {
      throw LabError(ErrorCode::DimensionMismatch, "input dimension does not match the channel");
    }
    ComplexMatrix out(dim_out_, dim_out_);
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  /// Output on |psi><psi| as sum_i (K_i psi)(K_i psi)*, without forming the projector.
  ComplexMatrix act_on_vector(const ComplexMatrix& psi) const {
    if (psi.rows() != dim_in_ || psi.cols() != 1) {
      throw LabError(ErrorCode::DimensionMismatch, "state dimension does not match the channel");
    }
    ComplexMatrix out(dim_out_, dim_out_);
    std::vector<Complex> w(dim_out_);
    for (const auto& k : kraus_) {
      for (std::size_t i = 0; i < dim_out_; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < dim_in_; ++j) s += k(i, j) * psi(j, 0);
        w[i] = s;
      }
      for (std::size_t i = 0; i < dim_out_; ++i)
        for (std::size_t j = 0; j < dim_out_; ++j) out(i, j) += w[i] * std::conj(w[j]);
    }
    return out;
  }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
};

inline DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim_in()) {
    throw LabError(ErrorCode::DimensionMismatch, "state dimension does not match the channel");
  }
  Tolerances tol;
  tol.density_trace = 1e-10;
  return DensityMatrix(channel.act(rho.matrix()), tol);
}

inline KrausChannel identity_channel(std::size_t d) { return KrausChannel({ComplexMatrix::identity(d)}); }

inline ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return ComplexMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
inline ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

namespace detail {

// Compares a channel with a reference action on every matrix unit E_ij.
template <class Reference>
void validate_action(const KrausChannel& ch, Reference reference, const char* name) {
  const std::size_t d = ch.dim_in();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix e(d, d);
      e(i, j) = 1.0;
      const double err = max_abs_diff(ch.act(e), reference(e));
      if (err > 1e-12) {
        std::ostringstream os;
        os << name << " Kraus set disagrees with its matrix action by " << err;
        throw LabError(ErrorCode::InvalidArgument, os.str());
      }
    }
}

}  // namespace detail

/// Qubit depolarizing channel rho -> lambda rho + (1 - lambda) Tr(rho) I/2.
inline KrausChannel depolarizing(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw LabError(ErrorCode::OutOfRange, "depolarizing parameter must lie in [0, 1]");
  }
  const double w0 = std::sqrt((1.0 + 3.0 * lambda) / 4.0);
  const double w = std::sqrt((1.0 - lambda) / 4.0);
  KrausChannel ch({w0 * ComplexMatrix::identity(2), w * pauli_x(), w * pauli_y(), w * pauli_z()});
  detail::validate_action(
      ch,
      [lambda](const ComplexMatrix& rho) {
        const double lp = 0.5 * (1.0 + lambda);
        const double lm = 0.5 * (1.0 - lambda);
        return ComplexMatrix{{lp * rho(0, 0) + lm * rho(1, 1), lambda * rho(0, 1)},
                             {lambda * rho(1, 0), lm * rho(0, 0) + lp * rho(1, 1)}};
      },
      "depolarizing");
  return ch;
}

/// Werner-Holevo channel rho -> (I Tr(rho) - rho^T)/(d - 1) with Kraus
/// operators (|i><j| - |j><i|)/sqrt(d - 1), i < j.
inline KrausChannel werner_holevo(std::size_t d) {
  if (d < 2) throw LabError(ErrorCode::OutOfRange, "Werner-Holevo channel needs d >= 2");
  const double w = 1.0 / std::sqrt(static_cast<double>(d - 1));
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      ComplexMatrix k(d, d);
      k(i, j) = w;
      k(j, i) = -w;
      ops.push_back(std::move(k));
    }
  KrausChannel ch(std::move(ops));
  detail::validate_action(
      ch,
      [d](const ComplexMatrix& rho) {
        ComplexMatrix out = ComplexMatrix::identity(d) * rho.trace() - rho.transpose();
        return out * (1.0 / static_cast<double>(d - 1));
      },
      "werner_holevo");
  return ch;
}

/// Kraus set {K_i (x) L_j}.
inline KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& k : a.kraus())
    for (const auto& l : b.kraus()) ops.push_back(kron(k, l));
  return KrausChannel(std::move(ops));
}

/// Random mixture of `terms` Haar unitaries with Dirichlet-like weights; unital.
inline KrausChannel random_unital_channel(std::size_t d, std::size_t terms, Rng& rng) {
  if (terms == 0) throw LabError(ErrorCode::InvalidArgument, "need at least one unitary");
  std::vector<double> weights(terms);
  double total = 0.0;
  for (double& x : weights) {
    x = -std::log(uniform(rng, 1e-300, 1.0));
    total += x;
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < terms; ++i) ops.push_back(std::sqrt(weights[i] / total) * random_unitary(d, rng));
  return KrausChannel(std::move(ops));
}

/// Random density matrix: Haar pure state when rank = 1, else normalized Wishart.
inline DensityMatrix random_density_matrix(std::size_t d, std::size_t rank, Rng& rng) {
  const ComplexMatrix w = wishart(d, rank, rng);
  return DensityMatrix(w * (1.0 / w.trace().real()));
}

/// -sum lambda ln lambda, with 0 ln 0 = 0.
inline double von_neumann_entropy(const std::vector<double>& eigenvalues) {
  double s = 0.0;
  for (double x : eigenvalues)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.eigenvalues()); }

}  // namespace schatten_lab
