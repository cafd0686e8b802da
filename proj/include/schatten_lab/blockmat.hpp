#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "schatten_lab/error.hpp"
#include "schatten_lab/matrix.hpp"
#include "schatten_lab/random.hpp"
#include "schatten_lab/schatten.hpp"
#include "schatten_lab/spectral.hpp"

namespace schatten_lab {

/// Builds [[tl, tr], [bl, br]] from four n x n blocks.
inline ComplexMatrix assemble_blocks(const ComplexMatrix& tl, const ComplexMatrix& tr, const ComplexMatrix& bl,
                                     const ComplexMatrix& br) {
  const std::size_t n = tl.rows();
  for (const ComplexMatrix* b : {&tl, &tr, &bl, &br}) {
    if (b->rows() != n || b->cols() != n) {
      throw LabError(ErrorCode::DimensionMismatch, "all blocks must be n x n");
    }
  }
  ComplexMatrix m(2 * n, 2 * n);
  m.set_block(0, 0, tl);
  m.set_block(0, n, tr);
  m.set_block(n, 0, bl);
  m.set_block(n, n, br);
  return m;
}

/// M = [[X, Y], [Y*, Z]] >= 0. The assembled matrix is validated once and its
/// spectrum cached, so repeated norm evaluations across p are cheap.
class PositiveBlock {
 public:
  PositiveBlock(PsdMatrix x, ComplexMatrix y, PsdMatrix z, const Tolerances& tol = {})
      : x_(std::move(x)), z_(std::move(z)), y_(std::move(y)), m_(validate(x_, y_, z_, tol)) {}

  /// Y = X^{1/2} R Z^{1/2} for a contraction R.
  static PositiveBlock from_contraction(const PsdMatrix& x, const ComplexMatrix& r, const PsdMatrix& z,
                                        const Tolerances& tol = {}) {
    const std::size_t n = x.dim();
    if (z.dim() != n || r.rows() != n || r.cols() != n) {
      throw LabError(ErrorCode::DimensionMismatch, "contraction and blocks must be n x n");
    }
    const double rop = schatten_norm(r, SchattenExponent::infinity());
    if (rop > 1.0 + tol.contraction) {
      std::ostringstream os;
      os << "||R||_op = " << rop << " exceeds 1";
      throw LabError(ErrorCode::OutOfRange, os.str());
    }
    const ComplexMatrix y = psd_power(x, 0.5).matrix() * r * psd_power(z, 0.5).matrix();
    PositiveBlock b(x, y, z, tol);
    b.contraction_ = r;
    return b;
  }

  std::size_t n() const noexcept { return x_.dim(); }
  const PsdMatrix& x() const noexcept { return x_; }
  const PsdMatrix& z() const noexcept { return z_; }
  const ComplexMatrix& y() const noexcept { return y_; }
  const std::optional<ComplexMatrix>& contraction() const noexcept { return contraction_; }

  /// The assembled 2n x 2n matrix as a validated PSD value.
  const PsdMatrix& assembled_psd() const noexcept { return m_; }
  const ComplexMatrix& assembled() const noexcept { return m_.matrix(); }

  PositiveBlock scaled(double k) const {
    if (!(k > 0.0)) throw LabError(ErrorCode::InvalidArgument, "scale factor must be positive");
    return PositiveBlock(PsdMatrix(x_.matrix() * k), y_ * k, PsdMatrix(z_.matrix() * k));
  }

 private:
  static PsdMatrix validate(const PsdMatrix& x, const ComplexMatrix& y, const PsdMatrix& z, const Tolerances& tol) {
    if (z.dim() != x.dim() || y.rows() != x.dim() || y.cols() != x.dim()) {
      throw LabError(ErrorCode::DimensionMismatch, "X, Y, Z must all be n x n");
    }
    return PsdMatrix(assemble_blocks(x.matrix(), y, y.adjoint(), z.matrix()), tol);
  }

  PsdMatrix x_;
  PsdMatrix z_;
  ComplexMatrix y_;
  PsdMatrix m_;
  std::optional<ComplexMatrix> contraction_;
};

/// [[X, Y], [W, Z]] with no positivity requirement.
struct GeneralBlock {
  ComplexMatrix x, y, w, z;

  GeneralBlock(ComplexMatrix x_, ComplexMatrix y_, ComplexMatrix w_, ComplexMatrix z_)
      : x(std::move(x_)), y(std::move(y_)), w(std::move(w_)), z(std::move(z_)) {
    const std::size_t n = x.rows();
    for (const ComplexMatrix* b : {&x, &y, &w, &z}) {
      if (b->rows() != n || b->cols() != n) throw LabError(ErrorCode::DimensionMismatch, "all blocks must be n x n");
    }
  }

  /// Positive block viewed as a general one, W = Y*.
  static GeneralBlock from_positive(const PositiveBlock& b) {
    return GeneralBlock(b.x().matrix(), b.y(), b.y().adjoint(), b.z().matrix());
  }

  std::size_t n() const noexcept { return x.rows(); }
};

inline ComplexMatrix assemble(const PositiveBlock& b) { return b.assembled(); }

inline ComplexMatrix assemble(const GeneralBlock& b) { return assemble_blocks(b.x, b.y, b.w, b.z); }

/// Sampling strategies. Equality cases of the inequalities sit on the
/// boundary, so the degenerate modes are exposed explicitly.
enum class SamplerMode {
  Standard,             // Gaussian contraction rescaled by its operator norm
  Boundary,             // R unitary: every singular value equals 1
  ZeroOffDiagonal,      // R = 0
  IdentityContraction,  // R = I
  RankDeficient,        // X of rank floor(n/2)
};

inline std::string_view sampler_mode_name(SamplerMode m) {
  switch (m) {
    case SamplerMode::Standard: return "standard";
    case SamplerMode::Boundary: return "boundary";
    case SamplerMode::ZeroOffDiagonal: return "zero";
    case SamplerMode::IdentityContraction: return "identity";
    case SamplerMode::RankDeficient: return "rank-deficient";
  }
  return "standard";
}

inline SamplerMode parse_sampler_mode(std::string_view s) {
  for (SamplerMode m : {SamplerMode::Standard, SamplerMode::Boundary, SamplerMode::ZeroOffDiagonal,
                        SamplerMode::IdentityContraction, SamplerMode::RankDeficient}) {
    if (sampler_mode_name(m) == s) return m;
  }
  throw LabError(ErrorCode::InvalidArgument, "unknown sampler mode '" + std::string(s) + "'");
}

inline PositiveBlock sample_positive_block(std::size_t n, Rng& rng, double scale = 1.0,
                                           SamplerMode mode = SamplerMode::Standard) {
  if (n == 0) throw LabError(ErrorCode::InvalidArgument, "block dimension must be >= 1");
  if (!(scale > 0.0)) throw LabError(ErrorCode::InvalidArgument, "scale must be positive");

  ComplexMatrix x(n, n);
  if (mode == SamplerMode::RankDeficient) {
    const std::size_t rank = n / 2;
    if (rank > 0) x = wishart(n, rank, rng, scale * static_cast<double>(rank) / static_cast<double>(n));
  } else {
    x = wishart(n, n, rng, scale);
  }
  const ComplexMatrix z = wishart(n, n, rng, scale);

  ComplexMatrix r(n, n);
  switch (mode) {
    case SamplerMode::Standard:
    case SamplerMode::RankDeficient: {
      r = complex_gaussian(n, n, rng);
      const double op = schatten_norm(r, SchattenExponent::infinity());
      if (op > 1.0) r *= Complex(1.0 / op);
      break;
    }
    case SamplerMode::Boundary: r = random_unitary(n, rng); break;
    case SamplerMode::ZeroOffDiagonal: break;
    case SamplerMode::IdentityContraction: r = ComplexMatrix::identity(n); break;
  }
  return PositiveBlock::from_contraction(PsdMatrix(x), r, PsdMatrix(z));
}

/// X = Z = (P+Q)/2, Y = (P-Q)/2, so that X+Y = P and X-Y = Q are both PSD.
inline PositiveBlock hanner_block(const PsdMatrix& p, const PsdMatrix& q) {
  const ComplexMatrix x = 0.5 * (p.matrix() + q.matrix());
  const ComplexMatrix y = 0.5 * (p.matrix() - q.matrix());
  return PositiveBlock(PsdMatrix(x), y, PsdMatrix(x));
}

inline PositiveBlock sample_hanner_pair(std::size_t n, Rng& rng) {
  if (n == 0) throw LabError(ErrorCode::InvalidArgument, "block dimension must be >= 1");
  const PsdMatrix p(wishart(n, n, rng));
  const PsdMatrix q(wishart(n, n, rng));
  return hanner_block(p, q);
}

/// Symmetric 2x2 real matrix [[x, y], [y, z]].
struct Symmetric2x2 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  ComplexMatrix matrix() const { return ComplexMatrix{{x, y}, {y, z}}; }
  double trace() const { return x + z; }
  double trace_of_square() const { return x * x + 2.0 * y * y + z * z; }
};

/// m = [[||X||_p, ||Y||_p], [||Y||_p, ||Z||_p]].
struct NormSummary : Symmetric2x2 {};

/// alpha = [[||X||_p, ((||Y||_p^p + ||W||_p^p)/2)^{1/p}], [., ||Z||_p]].
struct AlphaSummary : Symmetric2x2 {};

inline NormSummary make_norm_summary(double x, double y, double z) {
  if (!(x >= 0.0) || !(y >= 0.0) || !(z >= 0.0)) {
    throw LabError(ErrorCode::NotPositive, "norm summary entries must be nonnegative");
  }
  const double bound = std::sqrt(x * z);
  if (y > bound + 1e-10 * std::max(1.0, bound)) {
    std::ostringstream os;
    os << "off-diagonal " << y << " exceeds sqrt(x z) = " << bound;
    throw LabError(ErrorCode::NotPsd, os.str());
  }
  NormSummary m;
  m.x = x;
  m.y = y;
  m.z = z;
  return m;
}

inline NormSummary norm_summary(const PositiveBlock& b, const SchattenExponent& p) {
  return make_norm_summary(schatten_norm(b.x(), p), schatten_norm(b.y(), p), schatten_norm(b.z(), p));
}

inline AlphaSummary alpha_summary(const GeneralBlock& b, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw LabError(ErrorCode::OutOfRange, "alpha needs finite p >= 1");
  const SchattenExponent e(p);
  const double ny = schatten_norm(b.y, e);
  const double nw = schatten_norm(b.w, e);
  AlphaSummary a;
  a.x = schatten_norm(b.x, e);
  a.z = schatten_norm(b.z, e);
  // ((ny^p + nw^p)/2)^{1/p} with max-scaling to avoid overflow at large p
  const double top = std::max(ny, nw);
  a.y = top == 0.0 ? 0.0 : top * std::pow(0.5 * (std::pow(ny / top, p) + std::pow(nw / top, p)), 1.0 / p);
  return a;
}

/// ||m||_p = ((u+v)^p + (u-v)^p)^{1/p} with u the mean diagonal and v the
/// half-gap between the two eigenvalues.
inline double two_by_two_norm_closed_form(const Symmetric2x2& m, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw LabError(ErrorCode::OutOfRange, "closed form needs finite p >= 1");
  const double u = 0.5 * (m.x + m.z);
  const double half = 0.5 * (m.x - m.z);
  const double v = std::sqrt(half * half + m.y * m.y);
  double low = u - v;
  if (low < -1e-12 * std::max(1.0, u + v)) throw LabError(ErrorCode::NotPsd, "2x2 summary is not PSD");
  low = std::max(low, 0.0);
  const double high = u + v;
  if (high == 0.0) return 0.0;
  return high * std::pow(1.0 + std::pow(low / high, p), 1.0 / p);
}

inline constexpr std::size_t kMaxSignAverageDim = 12;

namespace detail {

// sum over sign vectors s in {+1,-1}^n of 2^{-n} s_{k(i)} s_{k(j)} a_ij,
// where k maps a row index to its sign slot.
template <class SlotOf>
ComplexMatrix sign_average(const ComplexMatrix& a, std::size_t n, SlotOf slot_of) {
  if (n > kMaxSignAverageDim) {
    throw LabError(ErrorCode::DimensionTooLarge, "sign averaging enumerates 2^n matrices; n must be <= 12");
  }
  const std::size_t dim = a.rows();
  const std::size_t count = std::size_t{1} << n;
  const double weight = 1.0 / static_cast<double>(count);
  ComplexMatrix out(dim, dim);
  std::vector<double> sign(n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t k = 0; k < n; ++k) sign[k] = (mask >> k) & 1U ? -1.0 : 1.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) out(i, j) += weight * sign[slot_of(i)] * sign[slot_of(j)] * a(i, j);
  }
  return out;
}

}  // namespace detail

/// Average of U A U* over all 2^n diagonal sign matrices U; equals diag(A).
inline ComplexMatrix sign_average_diagonal(const ComplexMatrix& a) {
  if (!a.is_square()) throw LabError(ErrorCode::DimensionMismatch, "sign averaging needs a square matrix");
  return detail::sign_average(a, a.rows(), [](std::size_t i) { return i; });
}

/// Same average with (U (+) U) acting on a 2n x 2n block matrix. For diagonal
/// Y this maps [[X, Y], [Y, Z]] to [[X_d, Y], [Y, Z_d]].
inline ComplexMatrix sign_average_block(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() % 2 != 0) {
    throw LabError(ErrorCode::DimensionMismatch, "block sign averaging needs a 2n x 2n matrix");
  }
  const std::size_t n = m.rows() / 2;
  return detail::sign_average(m, n, [n](std::size_t i) { return i % n; });
}

}  // namespace schatten_lab
