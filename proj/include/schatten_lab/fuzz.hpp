#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "schatten_lab/blockmat.hpp"
#include "schatten_lab/inequality.hpp"
#include "schatten_lab/random.hpp"

namespace schatten_lab {

/// Inequality families a fuzz campaign can target. The two block-norm families
/// produce A or B records depending on p.
enum class FuzzTarget { Theorem1, Theorem2, Gross, Hanner, Holder, Lemma2, Lemma3, Lemma4, Lemma5 };

inline std::string_view fuzz_target_name(FuzzTarget t) {
  switch (t) {
    case FuzzTarget::Theorem1: return "thm1";
    case FuzzTarget::Theorem2: return "thm2";
    case FuzzTarget::Gross: return "gross";
    case FuzzTarget::Hanner: return "hanner";
    case FuzzTarget::Holder: return "holder";
    case FuzzTarget::Lemma2: return "lemma2";
    case FuzzTarget::Lemma3: return "lemma3";
    case FuzzTarget::Lemma4: return "lemma4";
    case FuzzTarget::Lemma5: return "lemma5";
  }
  return "thm1";
}

inline FuzzTarget parse_fuzz_target(std::string_view s) {
  for (FuzzTarget t : {FuzzTarget::Theorem1, FuzzTarget::Theorem2, FuzzTarget::Gross, FuzzTarget::Hanner,
                       FuzzTarget::Holder, FuzzTarget::Lemma2, FuzzTarget::Lemma3, FuzzTarget::Lemma4,
                       FuzzTarget::Lemma5}) {
    if (fuzz_target_name(t) == s) return t;
  }
  throw LabError(ErrorCode::InvalidArgument, "unknown inequality '" + std::string(s) + "'");
}

/// Dense near the p = 2 transition.
inline std::vector<SchattenExponent> default_p_grid() {
  std::vector<SchattenExponent> g;
  for (double p : {1.0, 1.1, 1.3, 1.5, 1.7, 1.9, 2.0, 2.1, 2.5, 3.0, 4.0, 7.0, 10.0}) g.emplace_back(p);
  g.push_back(SchattenExponent::infinity());
  return g;
}

/// Whether the checker for `target` accepts exponent p.
inline bool accepts_exponent(FuzzTarget target, const SchattenExponent& p) {
  switch (target) {
    case FuzzTarget::Theorem1:
    case FuzzTarget::Hanner:
    case FuzzTarget::Holder: return true;
    case FuzzTarget::Theorem2: return !p.is_infinite();
    case FuzzTarget::Gross:
    case FuzzTarget::Lemma2:
    case FuzzTarget::Lemma3:
    case FuzzTarget::Lemma4: return !p.is_infinite() && p.value() <= 2.0;
    case FuzzTarget::Lemma5: return !p.is_infinite() && p.value() > 1.0 && p.value() <= 2.0;
  }
  return false;
}

inline std::vector<SchattenExponent> effective_grid(FuzzTarget target, const std::vector<SchattenExponent>& grid) {
  std::vector<SchattenExponent> out;
  for (const auto& p : grid)
    if (accepts_exponent(target, p)) out.push_back(p);
  return out;
}

struct FuzzSpec {
  FuzzTarget inequality = FuzzTarget::Theorem1;
  std::size_t trials = 1;
  std::vector<std::size_t> dims = {2};
  std::vector<SchattenExponent> p_grid = default_p_grid();
  std::uint64_t seed = 0;
  SamplerMode sampler_mode = SamplerMode::Standard;
  double tol_rel = 1e-8;
  unsigned jobs = 1;
};

struct Lemma2Instance {
  PositiveBlock a;
  PositiveBlock b;
  double lambda;
};

struct Lemma3Instance {
  Positive2x2 a;
  Positive2x2 b;
};

struct Lemma4Instance {
  double a, b, c, delta;
};

struct Lemma5Instance {
  HermitianMatrix a;
  HermitianMatrix b;
};

struct ScalarPair {
  double a, b;
};

using FuzzInstance = std::variant<PositiveBlock, GeneralBlock, ScalarPair, Lemma2Instance, Lemma3Instance,
                                  Lemma4Instance, Lemma5Instance>;

namespace detail {

inline Positive2x2 random_positive_2x2(Rng& rng) {
  const double a = std::exp(standard_normal(rng));
  const double b = std::exp(standard_normal(rng));
  const double c = std::sqrt(a * b) * uniform(rng, 0.0, 0.999);
  return {a, b, c};
}

}  // namespace detail

/// Regenerates the instance of one trial from its seed. Deterministic.
inline FuzzInstance make_instance(FuzzTarget target, std::uint64_t trial_seed, std::size_t n,
                                  SamplerMode mode = SamplerMode::Standard) {
  Rng rng(trial_seed);
  switch (target) {
    case FuzzTarget::Theorem1:
    case FuzzTarget::Holder: return sample_positive_block(n, rng, 1.0, mode);
    case FuzzTarget::Hanner: return sample_hanner_pair(n, rng);
    case FuzzTarget::Theorem2: {
      ComplexMatrix x = complex_gaussian(n, n, rng);
      ComplexMatrix y = complex_gaussian(n, n, rng);
      ComplexMatrix w = complex_gaussian(n, n, rng);
      ComplexMatrix z = complex_gaussian(n, n, rng);
      return GeneralBlock(std::move(x), std::move(y), std::move(w), std::move(z));
    }
    case FuzzTarget::Gross: {
      const double a = uniform(rng, -10.0, 10.0);
      const double b = uniform(rng, -10.0, 10.0);
      return ScalarPair{a, b};
    }
    case FuzzTarget::Lemma2: {
      PositiveBlock base = sample_positive_block(n, rng, 1.0, mode);
      const ComplexMatrix dx = wishart(n, n, rng, uniform(rng));
      const ComplexMatrix dz = wishart(n, n, rng, uniform(rng));
      PositiveBlock other(PsdMatrix(base.x().matrix() + dx), base.y(), PsdMatrix(base.z().matrix() + dz));
      const double lambda = uniform(rng);
      return Lemma2Instance{std::move(base), std::move(other), lambda};
    }
    case FuzzTarget::Lemma3: {
      const Positive2x2 a = detail::random_positive_2x2(rng);
      const Positive2x2 b = detail::random_positive_2x2(rng);
      return Lemma3Instance{a, b};
    }
    case FuzzTarget::Lemma4: {
      const Positive2x2 m = detail::random_positive_2x2(rng);
      const double delta = std::exp(standard_normal(rng));
      return Lemma4Instance{m.a, m.b, m.c, delta};
    }
    case FuzzTarget::Lemma5: {
      HermitianMatrix a(random_hermitian(n, rng));
      HermitianMatrix b(random_hermitian(n, rng));
      return Lemma5Instance{std::move(a), std::move(b)};
    }
  }
  throw LabError(ErrorCode::InvalidArgument, "unhandled fuzz target");
}

/// Record dimension reported for a target (scalar checks are not n-dependent).
inline std::size_t record_dimension(FuzzTarget target, std::size_t n) {
  switch (target) {
    case FuzzTarget::Gross: return 1;
    case FuzzTarget::Lemma3:
    case FuzzTarget::Lemma4: return 2;
    default: return n;
  }
}

inline InequalityId record_id(FuzzTarget target, const SchattenExponent& p) {
  const bool low = !p.is_infinite() && p.value() <= 2.0;
  switch (target) {
    case FuzzTarget::Theorem1: return low ? InequalityId::Thm1A : InequalityId::Thm1B;
    case FuzzTarget::Theorem2: return low ? InequalityId::Thm2A : InequalityId::Thm2B;
    case FuzzTarget::Gross: return InequalityId::Gross;
    case FuzzTarget::Hanner: return InequalityId::HannerForm;
    case FuzzTarget::Holder: return InequalityId::HolderYXZ;
    case FuzzTarget::Lemma2: return InequalityId::Lemma2;
    case FuzzTarget::Lemma3: return InequalityId::Lemma3;
    case FuzzTarget::Lemma4: return InequalityId::Lemma4;
    case FuzzTarget::Lemma5: return InequalityId::Lemma5;
  }
  return InequalityId::Thm1A;
}

/// Evaluates one instance at one exponent. Check errors become failed
/// records carrying the error code.
inline CheckRecord evaluate_instance(FuzzTarget target, const FuzzInstance& inst, const SchattenExponent& p,
                                     std::size_t n, double tol_rel, std::uint64_t seed) {
  try {
    switch (target) {
      case FuzzTarget::Theorem1: return check_theorem1(std::get<PositiveBlock>(inst), p, tol_rel, seed);
      case FuzzTarget::Holder: return check_holder(std::get<PositiveBlock>(inst), p, tol_rel, seed);
      case FuzzTarget::Hanner: return check_hanner_form(std::get<PositiveBlock>(inst), p, tol_rel, seed);
      case FuzzTarget::Theorem2: return check_theorem2(std::get<GeneralBlock>(inst), p.value(), tol_rel, seed);
      case FuzzTarget::Gross: {
        const auto& s = std::get<ScalarPair>(inst);
        return check_gross(s.a, s.b, p.value(), tol_rel, seed);
      }
      case FuzzTarget::Lemma2: {
        const auto& l = std::get<Lemma2Instance>(inst);
        return check_lemma2(l.a, l.b, p.value(), l.lambda, tol_rel, seed);
      }
      case FuzzTarget::Lemma3: {
        const auto& l = std::get<Lemma3Instance>(inst);
        return check_lemma3(l.a, l.b, p.value(), tol_rel, seed);
      }
      case FuzzTarget::Lemma4: {
        const auto& l = std::get<Lemma4Instance>(inst);
        return check_lemma4(l.a, l.b, l.c, p.value(), l.delta, tol_rel, seed);
      }
      case FuzzTarget::Lemma5: {
        const auto& l = std::get<Lemma5Instance>(inst);
        const auto steps = default_lemma5_steps();
        return check_lemma5(l.a, l.b, p.value(), steps, tol_rel, seed);
      }
    }
  } catch (const LabError& e) {
    return make_error_record(record_id(target, p), p, record_dimension(target, n), seed, e.code());
  }
  throw LabError(ErrorCode::InvalidArgument, "unhandled fuzz target");
}

/// Regenerate-and-check for one (target, trial seed, n, p): the re-validation
/// path for any record a campaign has written.
inline CheckRecord evaluate_trial(FuzzTarget target, std::uint64_t trial_seed, std::size_t n,
                                  const SchattenExponent& p, SamplerMode mode = SamplerMode::Standard,
                                  double tol_rel = 1e-8) {
  try {
    const FuzzInstance inst = make_instance(target, trial_seed, n, mode);
    return evaluate_instance(target, inst, p, n, tol_rel, trial_seed);
  } catch (const LabError& e) {
    return make_error_record(record_id(target, p), p, record_dimension(target, n), trial_seed, e.code());
  }
}

inline std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) { return derive_seed(base, trial); }

inline std::size_t trial_dimension(const FuzzSpec& spec, std::size_t trial) {
  return spec.dims[trial % spec.dims.size()];
}

/// Runs every trial at every accepted exponent. Records are ordered by
/// (trial, p) and then stably partitioned so failures come first.
inline std::vector<CheckRecord> fuzz_suite(const FuzzSpec& spec) {
  if (spec.trials == 0) throw LabError(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (spec.dims.empty()) throw LabError(ErrorCode::InvalidArgument, "need at least one dimension");
  for (std::size_t d : spec.dims)
    if (d == 0) throw LabError(ErrorCode::InvalidArgument, "dimensions must be >= 1");
  const auto grid = effective_grid(spec.inequality, spec.p_grid);
  if (grid.empty()) throw LabError(ErrorCode::OutOfRange, "no exponent in the grid is valid for this inequality");

  std::vector<std::vector<CheckRecord>> per_trial(spec.trials);
  auto run_trial = [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(spec.seed, t);
    const std::size_t n = trial_dimension(spec, t);
    auto& out = per_trial[t];
    out.reserve(grid.size());
    try {
      const FuzzInstance inst = make_instance(spec.inequality, seed, n, spec.sampler_mode);
      for (const auto& p : grid) out.push_back(evaluate_instance(spec.inequality, inst, p, n, spec.tol_rel, seed));
    } catch (const LabError& e) {
      for (const auto& p : grid)
        out.push_back(make_error_record(record_id(spec.inequality, p), p,
                                        record_dimension(spec.inequality, n), seed, e.code()));
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(spec.trials)));
  if (jobs == 1) {
    for (std::size_t t = 0; t < spec.trials; ++t) run_trial(t);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t t = w; t < spec.trials; t += jobs) run_trial(t);
      });
    }
  }

  std::vector<CheckRecord> records;
  records.reserve(spec.trials * grid.size());
  for (auto& v : per_trial)
    for (auto& r : v) records.push_back(std::move(r));
  std::stable_partition(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; });
  return records;
}

struct FuzzSummary {
  std::string inequality_id;
  std::size_t trials = 0;
  std::size_t records = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double min_relative_margin = std::numeric_limits<double>::infinity();
  std::vector<SchattenExponent> p_grid;
  std::uint64_t seed = 0;
};

inline FuzzSummary summarize(const FuzzSpec& spec, const std::vector<CheckRecord>& records) {
  FuzzSummary s;
  s.inequality_id = std::string(fuzz_target_name(spec.inequality));
  s.trials = spec.trials;
  s.records = records.size();
  s.p_grid = effective_grid(spec.inequality, spec.p_grid);
  s.seed = spec.seed;
  for (const auto& r : records) {
    if (!r.pass) ++s.failures;
    if (r.error) {
      ++s.errors;
      continue;
    }
    s.min_margin = std::min(s.min_margin, r.margin);
    s.min_relative_margin = std::min(s.min_relative_margin, r.relative_margin());
  }
  return s;
}

}  // namespace schatten_lab
