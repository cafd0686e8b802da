#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schatten_lab/blockmat.hpp"
#include "schatten_lab/error.hpp"
#include "schatten_lab/schatten.hpp"
#include "schatten_lab/spectral.hpp"

namespace schatten_lab {

enum class InequalityId { Thm1A, Thm1B, Thm2A, Thm2B, Gross, HannerForm, Lemma2, Lemma3, Lemma4, Lemma5, HolderYXZ };

inline std::string_view inequality_name(InequalityId id) {
  switch (id) {
    case InequalityId::Thm1A: return "THM1A";
    case InequalityId::Thm1B: return "THM1B";
    case InequalityId::Thm2A: return "THM2A";
    case InequalityId::Thm2B: return "THM2B";
    case InequalityId::Gross: return "GROSS";
    case InequalityId::HannerForm: return "HANNER_FORM";
    case InequalityId::Lemma2: return "LEMMA2";
    case InequalityId::Lemma3: return "LEMMA3";
    case InequalityId::Lemma4: return "LEMMA4";
    case InequalityId::Lemma5: return "LEMMA5";
    case InequalityId::HolderYXZ: return "HOLDER_YXZ";
  }
  return "UNKNOWN";
}

inline InequalityId parse_inequality_name(std::string_view s) {
  for (InequalityId id : {InequalityId::Thm1A, InequalityId::Thm1B, InequalityId::Thm2A, InequalityId::Thm2B,
                          InequalityId::Gross, InequalityId::HannerForm, InequalityId::Lemma2, InequalityId::Lemma3,
                          InequalityId::Lemma4, InequalityId::Lemma5, InequalityId::HolderYXZ}) {
    if (inequality_name(id) == s) return id;
  }
  throw LabError(ErrorCode::InvalidArgument, "unknown inequality id '" + std::string(s) + "'");
}

/// One evaluation of one inequality. margin >= 0 means the claimed
/// inequality holds; pass means margin >= -tol_rel * scale.
struct CheckRecord {
  InequalityId inequality_id = InequalityId::Thm1A;
  SchattenExponent p = SchattenExponent(2.0);
  std::size_t n = 1;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::uint64_t seed = 0;
  bool pass = true;
  double scale = 1.0;
  std::optional<std::string> error;

  double relative_margin() const { return margin / scale; }
};

inline CheckRecord make_record(InequalityId id, const SchattenExponent& p, std::size_t n, double lhs, double rhs,
                               double margin, double tol_rel, std::uint64_t seed = 0) {
  CheckRecord r;
  r.inequality_id = id;
  r.p = p;
  r.n = n;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.seed = seed;
  r.scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  r.pass = std::isfinite(margin) && margin >= -tol_rel * r.scale;
  return r;
}

inline CheckRecord make_error_record(InequalityId id, const SchattenExponent& p, std::size_t n, std::uint64_t seed,
                                     ErrorCode code) {
  CheckRecord r;
  r.inequality_id = id;
  r.p = p;
  r.n = n;
  r.seed = seed;
  r.pass = false;
  r.error = std::string(error_code_name(code));
  return r;
}

namespace detail {

// margin oriented by regime: lhs >= rhs claimed for p <= 2, lhs <= rhs for p > 2
inline double oriented_margin(const SchattenExponent& p, double lhs, double rhs) {
  return (!p.is_infinite() && p.value() <= 2.0) ? lhs - rhs : rhs - lhs;
}

inline bool lower_regime(const SchattenExponent& p) { return !p.is_infinite() && p.value() <= 2.0; }

inline void require_p_in(double p, double lo, double hi, bool open_low, const char* what) {
  const bool ok = std::isfinite(p) && (open_low ? p > lo : p >= lo) && p <= hi;
  if (!ok) throw LabError(ErrorCode::OutOfRange, std::string(what) + ": p out of range");
}

}  // namespace detail

/// ||M||_p against ||m||_p.
inline CheckRecord check_theorem1(const PositiveBlock& b, const SchattenExponent& p, double tol_rel = 1e-8,
                                  std::uint64_t seed = 0) {
  const double lhs = schatten_norm(b.assembled_psd(), p);
  const double rhs = schatten_norm(norm_summary(b, p).matrix(), p);
  const InequalityId id = detail::lower_regime(p) ? InequalityId::Thm1A : InequalityId::Thm1B;
  return make_record(id, p, b.n(), lhs, rhs, detail::oriented_margin(p, lhs, rhs), tol_rel, seed);
}

/// The block-norm comparison evaluated through the Hanner substitution; needs X = Z and Y = Y*.
inline CheckRecord check_hanner_form(const PositiveBlock& b, const SchattenExponent& p, double tol_rel = 1e-8,
                                     std::uint64_t seed = 0) {
  const double tol = 1e-12 * (1.0 + b.x().matrix().max_abs());
  if (max_abs_diff(b.x().matrix(), b.z().matrix()) > tol || max_abs_diff(b.y(), b.y().adjoint()) > tol) {
    throw LabError(ErrorCode::InvalidArgument, "Hanner form needs X = Z and Y self-adjoint");
  }
  const double sum = schatten_norm(b.x().matrix() + b.y(), p);
  const double diff = schatten_norm(b.x().matrix() - b.y(), p);
  const double nx = schatten_norm(b.x(), p);
  const double ny = schatten_norm(b.y(), p);
  double lhs = 0.0;
  double rhs = 0.0;
  if (p.is_infinite()) {
    lhs = std::max(sum, diff);
    rhs = nx + ny;
  } else {
    lhs = norm_from_singular_values({sum, diff}, p);
    rhs = norm_from_singular_values({nx + ny, std::abs(nx - ny)}, p);
  }
  return make_record(InequalityId::HannerForm, p, b.n(), lhs, rhs, detail::oriented_margin(p, lhs, rhs), tol_rel,
                     seed);
}

/// ||Y||_p <= ||X||_p^{1/2} ||Z||_p^{1/2}.
inline CheckRecord check_holder(const PositiveBlock& b, const SchattenExponent& p, double tol_rel = 1e-8,
                                std::uint64_t seed = 0) {
  const double lhs = schatten_norm(b.y(), p);
  const double rhs = std::sqrt(schatten_norm(b.x(), p) * schatten_norm(b.z(), p));
  return make_record(InequalityId::HolderYXZ, p, b.n(), lhs, rhs, rhs - lhs, tol_rel, seed);
}

/// 2^{1/p} [ (p-1)/2 Tr(alpha^2) + (2-p)/4 (Tr alpha)^2 ]^{1/2}.
inline double theorem2_bound(const AlphaSummary& alpha, double p) {
  const double t = alpha.trace();
  const double bracket = 0.5 * (p - 1.0) * alpha.trace_of_square() + 0.25 * (2.0 - p) * t * t;
  return std::pow(2.0, 1.0 / p) * std::sqrt(std::max(bracket, 0.0));
}

/// General (not necessarily positive) blocks; finite p only.
inline CheckRecord check_theorem2(const GeneralBlock& b, double p, double tol_rel = 1e-8, std::uint64_t seed = 0) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw LabError(ErrorCode::OutOfRange, "check_theorem2 evaluates finite p >= 1 only");
  }
  const SchattenExponent e(p);
  const double lhs = schatten_norm(assemble(b), e);
  const double rhs = theorem2_bound(alpha_summary(b, p), p);
  const InequalityId id = p <= 2.0 ? InequalityId::Thm2A : InequalityId::Thm2B;
  return make_record(id, e, b.n(), lhs, rhs, detail::oriented_margin(e, lhs, rhs), tol_rel, seed);
}

/// (|a+b|^p + |a-b|^p)^{1/p} >= 2^{1/p} (a^2 + (p-1) b^2)^{1/2}.
inline CheckRecord check_gross(double a, double b, double p, double tol_rel = 1e-8, std::uint64_t seed = 0) {
  detail::require_p_in(p, 1.0, 2.0, false, "Gross");
  const double lhs = norm_from_singular_values({std::abs(a + b), std::abs(a - b)}, SchattenExponent(p));
  const double rhs = std::pow(2.0, 1.0 / p) * std::sqrt(a * a + (p - 1.0) * b * b);
  return make_record(InequalityId::Gross, SchattenExponent(p), 1, lhs, rhs, lhs - rhs, tol_rel, seed);
}

namespace detail {

// Tr M^p - Tr X^p - Tr Z^p for M = [[X, Y], [Y*, Z]]
inline double lemma2_functional(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& z, double p) {
  auto tr_pow = [p](const ComplexMatrix& a) {
    double acc = 0.0;
    for (double ev : hermitian_eigenvalues(HermitianMatrix(a))) acc += std::pow(std::max(ev, 0.0), p);
    return acc;
  };
  return tr_pow(assemble_blocks(x, y, y.adjoint(), z)) - tr_pow(x) - tr_pow(z);
}

}  // namespace detail

/// Joint convexity of (X, Z) -> Tr M^p - Tr X^p - Tr Z^p at fixed Y.
inline CheckRecord check_lemma2(const PositiveBlock& a, const PositiveBlock& b, double p, double lambda,
                                double tol_rel = 1e-8, std::uint64_t seed = 0) {
  detail::require_p_in(p, 1.0, 2.0, false, "check_lemma2");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw LabError(ErrorCode::OutOfRange, "lambda must lie in [0, 1]");
  if (a.n() != b.n()) throw LabError(ErrorCode::DimensionMismatch, "blocks differ in size");
  if (max_abs_diff(a.y(), b.y()) > 1e-12 * (1.0 + a.y().max_abs())) {
    throw LabError(ErrorCode::InvalidPair, "check_lemma2 pairs must share the Y block");
  }
  const ComplexMatrix xm = lambda * a.x().matrix() + (1.0 - lambda) * b.x().matrix();
  const ComplexMatrix zm = lambda * a.z().matrix() + (1.0 - lambda) * b.z().matrix();
  const double fa = detail::lemma2_functional(a.x().matrix(), a.y(), a.z().matrix(), p);
  const double fb = detail::lemma2_functional(b.x().matrix(), b.y(), b.z().matrix(), p);
  const double lhs = detail::lemma2_functional(xm, a.y(), zm, p);
  const double rhs = lambda * fa + (1.0 - lambda) * fb;
  return make_record(InequalityId::Lemma2, SchattenExponent(p), a.n(), lhs, rhs, rhs - lhs, tol_rel, seed);
}

/// [[a, c], [c, b]] with a, b, c >= 0 and ab > c^2.
struct Positive2x2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Positive2x2() = default;
  Positive2x2(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
    if (!(a >= 0.0 && b >= 0.0 && c >= 0.0) || !(a * b - c * c > 0.0)) {
      throw LabError(ErrorCode::NotPositive, "need a, b, c >= 0 and ab > c^2");
    }
  }

  Positive2x2 operator+(const Positive2x2& o) const { return {a + o.a, b + o.b, c + o.c}; }
  Positive2x2 operator*(double k) const { return {a * k, b * k, c * k}; }
};

namespace detail {

// Eigenvalues of a symmetric 2x2 with nonnegative determinant, the smaller one
// taken as det / larger to avoid cancellation.
inline std::pair<double, double> symmetric_2x2_eigs(double x, double z, double y) {
  const double half = 0.5 * (x - z);
  const double hi = 0.5 * (x + z) + std::sqrt(half * half + y * y);
  const double det = x * z - y * y;
  const double lo = hi > 0.0 ? std::max(det, 0.0) / hi : 0.0;
  return {hi, lo};
}

}  // namespace detail

/// g(A) = Tr [[a^{1/p}, c^{1/p}], [c^{1/p}, b^{1/p}]]^p.
inline double lemma3_g(const Positive2x2& m, double p) {
  const double r = 1.0 / p;
  const auto [hi, lo] = detail::symmetric_2x2_eigs(std::pow(m.a, r), std::pow(m.b, r), std::pow(m.c, r));
  return std::pow(hi, p) + std::pow(lo, p);
}

/// Subadditivity g(A+B) <= g(A) + g(B), plus a homogeneity self-check.
inline CheckRecord check_lemma3(const Positive2x2& a, const Positive2x2& b, double p, double tol_rel = 1e-8,
                                std::uint64_t seed = 0) {
  detail::require_p_in(p, 1.0, 2.0, false, "check_lemma3");
  const double ga = lemma3_g(a, p);
  const double gb = lemma3_g(b, p);
  const double lhs = lemma3_g(a + b, p);
  const double rhs = ga + gb;
  CheckRecord rec = make_record(InequalityId::Lemma3, SchattenExponent(p), 2, lhs, rhs, rhs - lhs, tol_rel, seed);
  for (double k : {0.5, 2.0}) {
    const double gk = lemma3_g(a * k, p);
    if (std::abs(gk - k * ga) > 1e-10 * std::max(k * ga, 1e-300)) {
      rec.pass = false;
      rec.error = "HOMOGENEITY";
    }
  }
  return rec;
}

/// h(a, b) = Tr A^p - a^p - b^p at fixed c, written without cancellation.
inline double lemma4_h(double a, double b, double c, double p) {
  if (c == 0.0) return 0.0;
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  const double half_gap = 0.5 * (big - small);
  const double shift = c * c / (std::sqrt(half_gap * half_gap + c * c) + half_gap);
  // eigenvalues are big + shift and small - shift
  return std::pow(big, p) * std::expm1(p * std::log1p(shift / big)) +
         std::pow(small, p) * std::expm1(p * std::log1p(-shift / small));
}

/// Monotone decrease of h in a and in b for 1 <= p <= 2.
inline CheckRecord check_lemma4(double a, double b, double c, double p, double delta, double tol_rel = 1e-8,
                                std::uint64_t seed = 0) {
  detail::require_p_in(p, 1.0, 2.0, false, "check_lemma4");
  Positive2x2 checked(a, b, c);
  (void)checked;
  if (!(delta > 0.0) || !std::isfinite(delta)) throw LabError(ErrorCode::InvalidArgument, "delta must be positive");
  const double lhs = lemma4_h(a, b, c, p);
  const double rhs = std::max(lemma4_h(a + delta, b, c, p), lemma4_h(a, b + delta, c, p));
  return make_record(InequalityId::Lemma4, SchattenExponent(p), 2, lhs, rhs, lhs - rhs, tol_rel, seed);
}

inline constexpr double kLemma5PassTolerance = 1e-4;
inline constexpr double kLemma5StabilityTolerance = 1e-3;

inline std::vector<double> default_lemma5_steps() { return {1e-2, 5e-3, 2.5e-3}; }

/// Second derivative at r = 0 of (Tr|A + rB|^p)^{2/p}, by central differences
/// with Richardson extrapolation, against 2(p-1)(Tr|B|^p)^{2/p}.
inline CheckRecord check_lemma5(const HermitianMatrix& a, const HermitianMatrix& b, double p,
                                std::span<const double> h_steps, double tol_rel = kLemma5PassTolerance,
                                std::uint64_t seed = 0) {
  detail::require_p_in(p, 1.0, 2.0, true, "check_lemma5");
  if (a.dim() != b.dim()) throw LabError(ErrorCode::DimensionMismatch, "A and B differ in size");
  if (h_steps.empty()) throw LabError(ErrorCode::InvalidArgument, "need at least one step");
  for (std::size_t i = 0; i < h_steps.size(); ++i) {
    if (!(h_steps[i] > 0.0) || (i > 0 && !(h_steps[i] < h_steps[i - 1]))) {
      throw LabError(ErrorCode::InvalidArgument, "steps must be positive and strictly descending");
    }
  }
  const auto eig_a = hermitian_eigenvalues(a);
  double op = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (double ev : eig_a) {
    op = std::max(op, std::abs(ev));
    smallest = std::min(smallest, std::abs(ev));
  }
  if (!(smallest >= 1e-6 * op) || op == 0.0) {
    throw LabError(ErrorCode::NearSingular, "A is singular or nearly so");
  }

  auto phi = [&](double r) {
    const ComplexMatrix m = a.matrix() + r * b.matrix();
    double acc = 0.0;
    for (double ev : hermitian_eigenvalues(HermitianMatrix(m))) acc += std::pow(std::abs(ev), p);
    return std::pow(acc, 2.0 / p);
  };

  const double phi0 = phi(0.0);
  const std::size_t levels = h_steps.size();
  // table[i][k]: k-th extrapolation using steps 0..i
  std::vector<std::vector<double>> table(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    const double h = h_steps[i];
    table[i].resize(i + 1);
    table[i][0] = (phi(h) - 2.0 * phi0 + phi(-h)) / (h * h);
    for (std::size_t k = 1; k <= i; ++k) {
      const double ratio = std::pow(h_steps[i - k] / h, 2.0 * static_cast<double>(k));
      table[i][k] = table[i][k - 1] + (table[i][k - 1] - table[i - 1][k - 1]) / (ratio - 1.0);
    }
  }
  const auto& last = table.back();
  const double estimate = last.back();

  double tr_b = 0.0;
  for (double ev : hermitian_eigenvalues(b)) tr_b += std::pow(std::abs(ev), p);
  const double rhs = 2.0 * (p - 1.0) * std::pow(tr_b, 2.0 / p);

  const double scale = std::max({std::abs(estimate), std::abs(rhs), 1.0});
  for (std::size_t k = 1; k < last.size(); ++k) {
    if (std::abs(last[k] - last[k - 1]) > kLemma5StabilityTolerance * scale) {
      throw LabError(ErrorCode::Unstable, "Richardson levels disagree");
    }
  }
  return make_record(InequalityId::Lemma5, SchattenExponent(p), a.dim(), estimate, rhs, estimate - rhs,
                     std::max(tol_rel, kLemma5PassTolerance), seed);
}

inline CheckRecord check_lemma5(const HermitianMatrix& a, const HermitianMatrix& b, double p) {
  const auto steps = default_lemma5_steps();
  return check_lemma5(a, b, p, steps);
}

}  // namespace schatten_lab
