#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "schatten_lab/channel.hpp"
#include "schatten_lab/error.hpp"
#include "schatten_lab/random.hpp"
#include "schatten_lab/schatten.hpp"

namespace schatten_lab {

struct OptConfig {
  std::size_t restarts = 32;
  std::size_t max_iters = 200000;  // objective evaluations per restart
  double tol = 1e-6;               // agreement required among the top 3 restarts
  std::uint64_t seed = 0;
  double initial_step = 0.5;
  double min_step = 1e-8;
  unsigned jobs = 1;
};

struct OptResult {
  double value = 0.0;
  PureState argmax = PureState(ComplexMatrix::identity(1));
  std::size_t restarts_used = 0;
  bool converged = false;
  std::vector<double> history;  // best value per restart, in restart order
};

namespace detail {

enum class MoveKind { RealRotation, ComplexRotation, Phase };

struct Move {
  MoveKind kind;
  std::size_t i;
  std::size_t j;
};

inline std::vector<Move> sphere_moves(std::size_t d) {
  std::vector<Move> moves;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      moves.push_back({MoveKind::RealRotation, i, j});
      moves.push_back({MoveKind::ComplexRotation, i, j});
    }
  for (std::size_t j = 1; j < d; ++j) moves.push_back({MoveKind::Phase, j, j});
  return moves;
}

// Applies exp(i theta G) for the generator selected by the move; norm preserving.
inline void apply_move(ComplexMatrix& v, const Move& m, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  switch (m.kind) {
    case MoveKind::RealRotation: {
      const Complex a = v(m.i, 0);
      const Complex b = v(m.j, 0);
      v(m.i, 0) = c * a - s * b;
      v(m.j, 0) = s * a + c * b;
      break;
    }
    case MoveKind::ComplexRotation: {
      const Complex a = v(m.i, 0);
      const Complex b = v(m.j, 0);
      const Complex is(0.0, s);
      v(m.i, 0) = c * a + is * b;
      v(m.j, 0) = is * a + c * b;
      break;
    }
    case MoveKind::Phase: v(m.i, 0) *= Complex(c, s); break;
  }
}

inline void normalize(ComplexMatrix& v) { v *= Complex(1.0 / v.frobenius_norm()); }

struct RestartOutcome {
  double value;
  ComplexMatrix state;
};

// Sphere-adapted pattern search: try +-step along every rotation generator,
// keep improvements, halve the step after a sweep without progress.
inline RestartOutcome pattern_search(const std::function<double(const ComplexMatrix&)>& objective, std::size_t d,
                                     Rng& rng, const OptConfig& cfg) {
  ComplexMatrix psi = random_unit_vector(d, rng);
  double best = objective(psi);
  const auto moves = sphere_moves(d);
  std::size_t evals = 1;
  double step = cfg.initial_step;
  while (step > cfg.min_step && evals < cfg.max_iters && !moves.empty()) {
    bool improved = false;
    for (const Move& m : moves) {
      for (double sign : {1.0, -1.0}) {
        ComplexMatrix trial = psi;
        apply_move(trial, m, sign * step);
        const double f = objective(trial);
        ++evals;
        if (f > best) {
          best = f;
          psi = std::move(trial);
          improved = true;
          break;
        }
      }
      if (evals >= cfg.max_iters) break;
    }
    if (!improved) step *= 0.5;
    normalize(psi);
  }
  return {objective(psi), psi};
}

inline OptResult multi_start(const std::function<double(const ComplexMatrix&)>& objective, std::size_t d,
                             const OptConfig& cfg, bool negate_for_report) {
  if (cfg.restarts == 0) throw LabError(ErrorCode::InvalidArgument, "need at least one restart");
  std::vector<RestartOutcome> outcomes(cfg.restarts, RestartOutcome{0.0, ComplexMatrix(d, 1)});
  auto run = [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    outcomes[r] = pattern_search(objective, d, rng, cfg);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.restarts)));
  if (jobs == 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) run(r);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t r = w; r < cfg.restarts; r += jobs) run(r);
      });
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;

  std::vector<double> sorted;
  for (const auto& o : outcomes) sorted.push_back(o.value);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t top = std::min<std::size_t>(3, sorted.size());
  const double spread = sorted.front() - sorted[top - 1];

  OptResult res;
  const double sign = negate_for_report ? -1.0 : 1.0;
  res.value = sign * objective(outcomes[best].state);
  res.argmax = PureState(outcomes[best].state);
  res.restarts_used = cfg.restarts;
  res.converged = spread <= cfg.tol * std::max(1.0, std::abs(sorted.front()));
  for (const auto& o : outcomes) res.history.push_back(sign * o.value);
  return res;
}

inline std::vector<double> output_spectrum(const KrausChannel& ch, const ComplexMatrix& psi) {
  auto ev = hermitian_eigenvalues(HermitianMatrix(ch.act_on_vector(psi)));
  for (double& x : ev) x = std::max(x, 0.0);
  return ev;
}

}  // namespace detail

/// ||Phi(|psi><psi|)||_p for a unit vector psi.
inline double output_norm(const KrausChannel& ch, const ComplexMatrix& psi, const SchattenExponent& p) {
  return norm_from_singular_values(detail::output_spectrum(ch, psi), p);
}

/// Maximal output p-norm, searched over pure inputs (the supremum over
/// density matrices is attained there since the objective is convex in rho).
/// The value is a lower bound on the true supremum.
inline OptResult nu_p(const KrausChannel& ch, const SchattenExponent& p, const OptConfig& cfg = {}) {
  auto objective = [&](const ComplexMatrix& psi) { return output_norm(ch, psi, p); };
  return detail::multi_start(objective, ch.dim_in(), cfg, false);
}

/// Minimal output von Neumann entropy (natural log) over pure inputs.
inline OptResult s_min(const KrausChannel& ch, const OptConfig& cfg = {}) {
  auto objective = [&](const ComplexMatrix& psi) {
    return -von_neumann_entropy(detail::output_spectrum(ch, psi));
  };
  return detail::multi_start(objective, ch.dim_in(), cfg, true);
}

/// Closed form of the maximal p-norm of the qubit depolarizing channel.
inline double depolarizing_nu_closed_form(double lambda, const SchattenExponent& p) {
  return norm_from_singular_values({0.5 * (1.0 + lambda), 0.5 * (1.0 - lambda)}, p);
}

/// d^{-1/2} sum_i |ii>.
inline ComplexMatrix maximally_entangled_vector(std::size_t d) {
  ComplexMatrix v(d * d, 1);
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) v(i * d + i, 0) = w;
  return v;
}

/// ||(Phi1 (x) Phi2)(|psi_ME><psi_ME|)||_p: a feasible point, hence a lower
/// bound on nu_p(Phi1 (x) Phi2).
inline double entangled_lower_bound(const KrausChannel& a, const KrausChannel& b, const SchattenExponent& p) {
  if (a.dim_in() != b.dim_in()) {
    throw LabError(ErrorCode::DimensionMismatch, "entangled witness needs equal input dimensions");
  }
  return output_norm(tensor(a, b), maximally_entangled_vector(a.dim_in()), p);
}

struct GapResult {
  double nu_first = 0.0;
  double nu_second = 0.0;
  double nu_product = 0.0;
  double nu_joint_lower = 0.0;
  double gap = 0.0;
  bool converged = false;
};

/// nu_p(Phi1 (x) Phi2) found by the optimizer minus nu_p(Phi1) nu_p(Phi2).
/// A gap above tolerance certifies a violation of multiplicativity.
inline GapResult multiplicativity_gap(const KrausChannel& a, const KrausChannel& b, const SchattenExponent& p,
                                      const OptConfig& cfg = {}) {
  GapResult g;
  const OptResult ra = nu_p(a, p, cfg);
  OptConfig cfg_b = cfg;
  cfg_b.seed = derive_seed(cfg.seed, 1000003);
  const OptResult rb = nu_p(b, p, cfg_b);
  OptConfig cfg_j = cfg;
  cfg_j.seed = derive_seed(cfg.seed, 2000003);
  const OptResult rj = nu_p(tensor(a, b), p, cfg_j);
  g.nu_first = ra.value;
  g.nu_second = rb.value;
  g.nu_product = ra.value * rb.value;
  g.nu_joint_lower = rj.value;
  g.gap = g.nu_joint_lower - g.nu_product;
  g.converged = ra.converged && rb.converged && rj.converged;
  return g;
}

/// nu_p(Delta) nu_p(Phi) - ||(Delta (x) Phi)(rho)||_p for one bipartite state.
inline double product_bound_margin(const KrausChannel& delta_phi, double bound, const DensityMatrix& rho,
                                   const SchattenExponent& p) {
  return bound - schatten_norm(delta_phi.act(rho.matrix()), p);
}

/// Worst margin of the product bound for Delta(lambda) (x) Phi over sampled
/// 2n x 2n states, alternating pure and mixed samples.
inline double depolarizing_product_bound_check(const KrausChannel& phi, double lambda, const SchattenExponent& p,
                                               std::size_t samples, Rng& rng, const OptConfig& cfg = {}) {
  if (p.as_double() < 2.0) throw LabError(ErrorCode::OutOfRange, "product bound check needs p >= 2");
  if (samples == 0) throw LabError(ErrorCode::InvalidArgument, "need at least one sample");
  const KrausChannel joint = tensor(depolarizing(lambda), phi);
  const double bound = depolarizing_nu_closed_form(lambda, p) * nu_p(phi, p, cfg).value;
  const std::size_t dim = 2 * phi.dim_in();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t rank = s % 2 == 0 ? 1 : 1 + static_cast<std::size_t>(uniform(rng) * static_cast<double>(dim));
    const DensityMatrix rho = random_density_matrix(dim, std::min(rank, dim), rng);
    worst = std::min(worst, product_bound_margin(joint, bound, rho, p));
  }
  return worst;
}

}  // namespace schatten_lab
