#pragma once

#include "bvi/gap.hpp"
#include "bvi/problem.hpp"

namespace bvi {

/// Geometric penalty-parameter schedule rho = rho0 * sigma^increments.
struct PenaltyState {
  double rho0 = 1.0;
  double sigma = 1.2;
  double epsilon = 0.0;
  int increments = 0;

  double rho() const;
  void escalate() { ++increments; }
  void validate() const;
};

struct InnerSolverConfig {
  /// Objective-accuracy target; <= 0 selects 1e-7 * (1 + |F(warm_start)|).
  double tol = 0.0;
  int max_iterations = 20000;
  double feasibility_tol = 1e-8;
};

struct PenalizedSolution {
  Vector x;
  double penalized_value;  // F(x) = f(x) + rho * (psi_M_B(x) - eps)^+
  bool converged;          // false when the iteration budget ran out first
  int iterations;
};

/// Minimizes F(x) = f(x) + rho * max(0, psi_M_B(x) - eps) over C by
/// projected subgradient steps with an adaptive Polyak-style target,
/// warm-started and deterministic. At the kink the penalty-active
/// subgradient is used.
PenalizedSolution solve_penalized(const ProblemInstance& instance,
                                  const CutPool& pool, const PenaltyState& state,
                                  const Vector& warm_start,
                                  const InnerSolverConfig& config);

inline constexpr int kMaxEscalations = 200;

struct PenaltyLoopResult {
  Vector x;
  double pool_gap;  // psi_M_B at x, <= eps + feasibility_tol on exit
  int escalations;
  bool inner_converged;
};

/// Solve-then-escalate loop: grows rho by sigma until the penalized
/// minimizer is eps-feasible for the current cut pool. Finitely many
/// escalations by the uniform exact-penalty property; a run above
/// kMaxEscalations throws, as that signals broken inputs.
PenaltyLoopResult exact_penalty_loop(const ProblemInstance& instance,
                                     const CutPool& pool, PenaltyState& state,
                                     const Vector& warm_start,
                                     const InnerSolverConfig& config);

}  // namespace bvi
