#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "schatten_lab/inequality.hpp"
#include "schatten_lab/random.hpp"

namespace {

using namespace schatten_lab;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const LabError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected LabError";
  return ErrorCode::InvalidArgument;
}

PositiveBlock perturbed(const PositiveBlock& base, Rng& rng) {
  const std::size_t n = base.n();
  return PositiveBlock(PsdMatrix(base.x().matrix() + wishart(n, n, rng)), base.y(),
                       PsdMatrix(base.z().matrix() + wishart(n, n, rng)));
}

Positive2x2 random_positive_2x2(Rng& rng) {
  const double a = std::exp(standard_normal(rng));
  const double b = std::exp(standard_normal(rng));
  return {a, b, std::sqrt(a * b) * uniform(rng, 0.0, 0.999)};
}

TEST(CheckRecord, PassFollowsRelativeTolerance) {
  EXPECT_TRUE(make_record(InequalityId::Gross, SchattenExponent(1.5), 1, 100.0, 100.0, -0.9e-6, 1e-8).pass);
  EXPECT_FALSE(make_record(InequalityId::Gross, SchattenExponent(1.5), 1, 100.0, 100.0, -1.1e-6, 1e-8).pass);
  const CheckRecord r = make_record(InequalityId::Gross, SchattenExponent(1.5), 1, 0.2, -0.5, 0.0, 1e-8);
  EXPECT_EQ(r.scale, 1.0);
}

TEST(CheckRecord, NamesRoundTrip) {
  for (InequalityId id : {InequalityId::Thm1A, InequalityId::Thm2B, InequalityId::HannerForm, InequalityId::Lemma5,
                          InequalityId::HolderYXZ}) {
    EXPECT_EQ(parse_inequality_name(inequality_name(id)), id);
  }
  EXPECT_EQ(code_of([] { parse_inequality_name("THM3"); }), ErrorCode::InvalidArgument);
}

TEST(CheckTheorem1, EqualityAtOneAndTwo) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const PositiveBlock b = sample_positive_block(1 + seed % 5, rng);
    for (double p : {1.0, 2.0}) {
      const CheckRecord r = check_theorem1(b, SchattenExponent(p));
      EXPECT_LE(std::abs(r.margin), 1e-10 * r.scale) << seed << " p=" << p;
    }
    const double tr = b.x().matrix().trace().real() + b.z().matrix().trace().real();
    EXPECT_NEAR(check_theorem1(b, SchattenExponent(1.0)).lhs, tr, 1e-10 * tr);
  }
}

TEST(CheckTheorem1, Seed1234HoldsInBothRegimes) {
  Rng rng(1234);
  const PositiveBlock b = sample_positive_block(4, rng);
  const CheckRecord a = check_theorem1(b, SchattenExponent(1.5));
  EXPECT_EQ(a.inequality_id, InequalityId::Thm1A);
  EXPECT_GE(a.margin, 0.0);
  for (const auto& p : {SchattenExponent(3.0), SchattenExponent::infinity()}) {
    const CheckRecord r = check_theorem1(b, p);
    EXPECT_EQ(r.inequality_id, InequalityId::Thm1B);
    EXPECT_GE(r.margin, 0.0) << p.to_string();
  }
}

TEST(CheckTheorem1, DirectionFlipAroundTwo) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(300 + seed);
    const PositiveBlock b = sample_positive_block(1 + seed % 6, rng);
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {0.1, 0.01}) {
      const CheckRecord lo = check_theorem1(b, SchattenExponent(2.0 - eps));
      const CheckRecord hi = check_theorem1(b, SchattenExponent(2.0 + eps));
      EXPECT_EQ(lo.inequality_id, InequalityId::Thm1A);
      EXPECT_EQ(hi.inequality_id, InequalityId::Thm1B);
      EXPECT_GE(lo.margin, -1e-8 * lo.scale);
      EXPECT_GE(hi.margin, -1e-8 * hi.scale);
      const double worst = std::max(std::abs(lo.margin), std::abs(hi.margin));
      EXPECT_LE(worst, previous + 1e-12);
      previous = worst;
    }
    EXPECT_LE(previous, 0.05);
  }
}

TEST(CheckHannerForm, AgreesWithAssembledBlock) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(400 + seed);
    const PositiveBlock b = sample_hanner_pair(1 + seed % 5, rng);
    for (const auto& p : {SchattenExponent(1.0), SchattenExponent(1.3), SchattenExponent(2.0), SchattenExponent(2.7),
                          SchattenExponent(8.0), SchattenExponent::infinity()}) {
      const CheckRecord h = check_hanner_form(b, p);
      const CheckRecord t = check_theorem1(b, p);
      EXPECT_NEAR(h.lhs, t.lhs, 1e-9 * t.scale);
      EXPECT_NEAR(h.rhs, t.rhs, 1e-9 * t.scale);
      EXPECT_NEAR(h.margin, t.margin, 1e-9 * t.scale);
    }
  }
}

TEST(CheckHannerForm, RejectsUnequalDiagonalBlocks) {
  Rng rng(1);
  const PositiveBlock b = sample_positive_block(2, rng);
  EXPECT_EQ(code_of([&] { check_hanner_form(b, SchattenExponent(1.5)); }), ErrorCode::InvalidArgument);
}

TEST(CheckHolder, HoldsOnSamples) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const PositiveBlock b = sample_positive_block(1 + seed % 4, rng, 1.0, SamplerMode::Boundary);
    for (double p : {1.0, 1.5, 4.0}) EXPECT_TRUE(check_holder(b, SchattenExponent(p)).pass);
  }
}

TEST(CheckTheorem2, ZeroBlock) {
  const ComplexMatrix zero = ComplexMatrix::zeros(2, 2);
  const CheckRecord r = check_theorem2(GeneralBlock(zero, zero, zero, zero), 1.5);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_EQ(r.margin, 0.0);
}

TEST(CheckTheorem2, FrobeniusEqualityAtTwo) {
  Rng rng(5);
  const GeneralBlock g(complex_gaussian(3, 3, rng), complex_gaussian(3, 3, rng), complex_gaussian(3, 3, rng),
                       complex_gaussian(3, 3, rng));
  const CheckRecord r = check_theorem2(g, 2.0);
  double f2 = 0.0;
  for (const ComplexMatrix* m : {&g.x, &g.y, &g.w, &g.z}) f2 += std::pow(m->frobenius_norm(), 2);
  EXPECT_NEAR(r.rhs, std::sqrt(f2), 1e-12 * r.scale);
  EXPECT_LE(std::abs(r.margin), 1e-10 * r.scale);
}

TEST(CheckTheorem2, Seed77HoldsInBothRegimes) {
  Rng rng(77);
  const GeneralBlock g(complex_gaussian(3, 3, rng), complex_gaussian(3, 3, rng), complex_gaussian(3, 3, rng),
                       complex_gaussian(3, 3, rng));
  const CheckRecord a = check_theorem2(g, 1.4);
  const CheckRecord b = check_theorem2(g, 3.5);
  EXPECT_EQ(a.inequality_id, InequalityId::Thm2A);
  EXPECT_EQ(b.inequality_id, InequalityId::Thm2B);
  EXPECT_GE(a.margin, 0.0);
  EXPECT_GE(b.margin, 0.0);
}

TEST(CheckTheorem2, RejectsNonFiniteExponent) {
  const ComplexMatrix one{{1.0}};
  const GeneralBlock g(one, one, one, one);
  EXPECT_EQ(code_of([&] { check_theorem2(g, std::numeric_limits<double>::infinity()); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([&] { check_theorem2(g, 0.5); }), ErrorCode::OutOfRange);
}

TEST(CheckTheorem2, PositiveBlocksSitBelowTheTheorem1Chain) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(500 + seed);
    const PositiveBlock b = sample_positive_block(1 + seed % 5, rng);
    for (double p : {1.0, 1.2, 1.5, 1.8, 2.0}) {
      const CheckRecord t2 = check_theorem2(GeneralBlock::from_positive(b), p);
      const double chain = schatten_norm(norm_summary(b, SchattenExponent(p)).matrix(), SchattenExponent(p));
      EXPECT_LE(t2.rhs, chain * (1.0 + 1e-10)) << seed << " p=" << p;
      EXPECT_LE(chain, t2.lhs * (1.0 + 1e-10)) << seed << " p=" << p;
    }
  }
}

TEST(CheckGross, Examples) {
  for (double p : {1.0, 1.3, 2.0}) {
    const CheckRecord r = check_gross(-3.0, 0.0, p);
    EXPECT_NEAR(r.lhs, std::pow(2.0, 1.0 / p) * 3.0, 1e-14);
    EXPECT_NEAR(r.margin, 0.0, 1e-14);
  }
  for (double a : {-2.0, 0.5, 7.0})
    for (double b : {-1.5, 3.0}) EXPECT_NEAR(check_gross(a, b, 2.0).margin, 0.0, 1e-12);
  const CheckRecord r = check_gross(0.0, 2.0, 1.5);
  EXPECT_NEAR(r.margin, std::pow(2.0, 2.0 / 3.0) * 2.0 * (1.0 - std::sqrt(0.5)), 1e-14);
}

TEST(CheckGross, RejectsExponentAboveTwo) {
  EXPECT_EQ(code_of([] { check_gross(1.0, 1.0, 2.5); }), ErrorCode::OutOfRange);
}

TEST(CheckLemma2, TrivialCases) {
  Rng rng(20);
  const PositiveBlock a = sample_positive_block(3, rng);
  EXPECT_NEAR(check_lemma2(a, a, 1.5, 0.3).margin, 0.0, 1e-12);
  const PositiveBlock b = perturbed(a, rng);
  for (double lambda : {0.0, 1.0}) {
    const CheckRecord r = check_lemma2(a, b, 1.5, lambda);
    EXPECT_LE(std::abs(r.margin), 1e-12 * r.scale);
  }
}

TEST(CheckLemma2, Seed21) {
  Rng rng(21);
  const PositiveBlock a = sample_positive_block(3, rng);
  const PositiveBlock b = perturbed(a, rng);
  const CheckRecord r = check_lemma2(a, b, 1.5, 0.5);
  EXPECT_GE(r.margin, -1e-9 * r.scale);
}

TEST(CheckLemma2, RejectsDifferentY) {
  Rng rng(22);
  const PositiveBlock a = sample_positive_block(2, rng);
  const PositiveBlock b = sample_positive_block(2, rng);
  EXPECT_EQ(code_of([&] { check_lemma2(a, b, 1.5, 0.5); }), ErrorCode::InvalidPair);
  EXPECT_EQ(code_of([&] { check_lemma2(a, a, 1.5, 1.5); }), ErrorCode::OutOfRange);
}

TEST(CheckLemma3, Examples) {
  const Positive2x2 a(2.0, 3.0, 1.0);
  EXPECT_NEAR(lemma3_g(a * 2.0, 1.4), 2.0 * lemma3_g(a, 1.4), 1e-12);
  EXPECT_NEAR(check_lemma3(a, a, 1.4).margin, 0.0, 1e-12);
  const Positive2x2 d1(2.0, 5.0, 0.0);
  const Positive2x2 d2(0.5, 1.0, 0.0);
  EXPECT_NEAR(lemma3_g(d1, 1.7), 7.0, 1e-13);
  EXPECT_NEAR(check_lemma3(d1, d2, 1.7).margin, 0.0, 1e-12);
}

TEST(CheckLemma3, Seed31RandomPairsAndMidpointConvexity) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const Positive2x2 a = random_positive_2x2(rng);
    const Positive2x2 b = random_positive_2x2(rng);
    const CheckRecord r = check_lemma3(a, b, 1.3);
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.error.has_value());
    EXPECT_GE(r.margin, -1e-9 * r.scale);
    const double mid = lemma3_g((a + b) * 0.5, 1.3);
    EXPECT_LE(mid, 0.5 * (lemma3_g(a, 1.3) + lemma3_g(b, 1.3)) + 1e-9 * r.scale);
  }
}

TEST(CheckLemma3, RejectsNonPositive) {
  EXPECT_EQ(code_of([] { Positive2x2(1.0, 1.0, 1.0); }), ErrorCode::NotPositive);
  EXPECT_EQ(code_of([] { Positive2x2(-1.0, 1.0, 0.0); }), ErrorCode::NotPositive);
}

TEST(CheckLemma4, Examples) {
  EXPECT_EQ(lemma4_h(2.0, 3.0, 0.0, 1.5), 0.0);
  EXPECT_EQ(check_lemma4(2.0, 3.0, 0.0, 1.5, 0.5).margin, 0.0);
  const double a = 1.0;
  const double b = 2.0;
  const double c = 0.8;
  const double far = lemma4_h(1e6 * a, b, c, 1.5);
  EXPECT_NEAR(far, 1.5 * c * c * std::pow(1e6 * a, -0.5), 1e-2 * far);
  const CheckRecord r = check_lemma4(a, b, c, 1.5, 1e6 * a - a);
  EXPECT_GT(r.margin, 0.0);
}

TEST(CheckLemma4, StableFormMatchesEigenvalues) {
  Rng rng(40);
  for (int i = 0; i < 200; ++i) {
    const Positive2x2 m = random_positive_2x2(rng);
    const double p = uniform(rng, 1.0, 2.0);
    const auto ev = hermitian_eigenvalues(HermitianMatrix(ComplexMatrix{{m.a, m.c}, {m.c, m.b}}));
    const double direct = std::pow(ev[0], p) + std::pow(std::max(ev[1], 0.0), p) - std::pow(m.a, p) - std::pow(m.b, p);
    EXPECT_NEAR(lemma4_h(m.a, m.b, m.c, p), direct, 1e-11 * (1.0 + std::pow(m.a + m.b, p)));
  }
}

TEST(CheckLemma4, Seed41Grid) {
  Rng rng(41);
  for (double p : {1.1, 1.5, 1.9}) {
    for (int i = 0; i < 100; ++i) {
      const Positive2x2 m = random_positive_2x2(rng);
      const double delta = std::exp(standard_normal(rng));
      const CheckRecord r = check_lemma4(m.a, m.b, m.c, p, delta);
      EXPECT_GE(r.margin, -1e-9 * r.scale) << p;
    }
  }
}

TEST(CheckLemma4, RejectsOutOfRange) {
  EXPECT_EQ(code_of([] { check_lemma4(1.0, 1.0, 2.0, 1.5, 1.0); }), ErrorCode::NotPositive);
  EXPECT_EQ(code_of([] { check_lemma4(1.0, 1.0, 0.5, 2.5, 1.0); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { check_lemma4(1.0, 1.0, 0.5, 1.5, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(CheckLemma5, ZeroDirection) {
  Rng rng(50);
  const HermitianMatrix a(random_hermitian(3, rng));
  const CheckRecord r = check_lemma5(a, HermitianMatrix(ComplexMatrix::zeros(3, 3)), 1.5);
  EXPECT_NEAR(r.lhs, 0.0, 1e-8);
  EXPECT_TRUE(r.pass);
}

TEST(CheckLemma5, ExactQuadraticAtTwo) {
  const HermitianMatrix a(ComplexMatrix::identity(2));
  const HermitianMatrix b(ComplexMatrix::diagonal({1.0, -1.0}));
  const CheckRecord r = check_lemma5(a, b, 2.0);
  EXPECT_NEAR(r.lhs, 4.0, 1e-6);
  EXPECT_NEAR(r.rhs, 4.0, 1e-14);
  EXPECT_TRUE(r.pass);
}

TEST(CheckLemma5, Seed51) {
  Rng rng(51);
  const HermitianMatrix a(random_hermitian(4, rng));
  const HermitianMatrix b(random_hermitian(4, rng));
  const CheckRecord r = check_lemma5(a, b, 1.5);
  EXPECT_GE(r.margin, -1e-4 * r.scale);
}

TEST(CheckLemma5, ErrorPaths) {
  const HermitianMatrix singular(ComplexMatrix::diagonal({1.0, 0.0}));
  const HermitianMatrix b(ComplexMatrix::diagonal({1.0, 2.0}));
  EXPECT_EQ(code_of([&] { check_lemma5(singular, b, 1.5); }), ErrorCode::NearSingular);
  const HermitianMatrix a(ComplexMatrix::identity(2));
  EXPECT_EQ(code_of([&] { check_lemma5(a, b, 1.0); }), ErrorCode::OutOfRange);
  const std::vector<double> ascending = {1e-3, 1e-2};
  EXPECT_EQ(code_of([&] { check_lemma5(a, b, 1.5, ascending); }), ErrorCode::InvalidArgument);
  // a step so large that A + hB crosses zero makes the Richardson levels disagree
  const HermitianMatrix steep(ComplexMatrix::diagonal({1.0, -50.0}));
  const std::vector<double> coarse = {0.5, 0.25, 0.125};
  EXPECT_EQ(code_of([&] { check_lemma5(HermitianMatrix(ComplexMatrix::diagonal({1.0, 1.0})), steep, 1.5, coarse); }),
            ErrorCode::Unstable);
}

TEST(ScaleInvariance, MarginsScaleLinearly) {
  const double k = 10.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(600 + seed);
    const PositiveBlock b = sample_positive_block(1 + seed % 4, rng);
    const PositiveBlock kb = b.scaled(k);
    for (const auto& p : {SchattenExponent(1.3), SchattenExponent(2.5), SchattenExponent::infinity()}) {
      const CheckRecord r = check_theorem1(b, p);
      const CheckRecord rk = check_theorem1(kb, p);
      EXPECT_NEAR(rk.margin, k * r.margin, 1e-8 * k * r.scale);
    }
    const GeneralBlock g(complex_gaussian(2, 2, rng), complex_gaussian(2, 2, rng), complex_gaussian(2, 2, rng),
                         complex_gaussian(2, 2, rng));
    const GeneralBlock kg(g.x * k, g.y * k, g.w * k, g.z * k);
    for (double p : {1.5, 3.0}) {
      const CheckRecord r = check_theorem2(g, p);
      EXPECT_NEAR(check_theorem2(kg, p).margin, k * r.margin, 1e-8 * k * r.scale);
    }
  }
}

}  // namespace
