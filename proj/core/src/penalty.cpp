#include "bvi/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace bvi {

double PenaltyState::rho() const { return rho0 * std::pow(sigma, increments); }

void PenaltyState::validate() const {
  if (!(rho0 > 0.0)) throw std::invalid_argument("penalty state: rho0 must be positive");
  if (!(sigma > 1.0)) throw std::invalid_argument("penalty state: sigma must exceed 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("penalty state: epsilon must be positive");
  if (increments < 0) throw std::invalid_argument("penalty state: negative increments");
}

PenalizedSolution solve_penalized(const ProblemInstance& instance,
                                  const CutPool& pool, const PenaltyState& state,
                                  const Vector& warm_start,
                                  const InnerSolverConfig& config) {
  if (pool.empty()) throw std::invalid_argument("solve_penalized: empty cut pool");
  state.validate();
  const double rho = state.rho();
  const double eps = state.epsilon;
  const FeasibleSet& set = instance.set;

  auto evaluate = [&](const Vector& p, Vector& grad) {
    auto pe = pool.value(p);
    double violation = pe.value - eps;
    grad = instance.objective.subgradient(p);
    double val = instance.objective.value(p);
    if (violation >= 0.0) {
      grad.noalias() += rho * pool.cut_operator(pe.active_index);
      val += rho * violation;
    }
    return val;
  };

  Vector x = set.project(warm_start);
  Vector grad(x.size());
  double fx = evaluate(x, grad);
  const double tol = config.tol > 0.0 ? config.tol : 1e-7 * (1.0 + std::abs(fx));

  Vector best_x = x;
  double best_f = fx;
  double target_gap = std::max(16.0 * tol, 0.02 * (1.0 + std::abs(fx)));
  const double gap_floor = 0.25 * tol;
  const double diam = std::max(set.diameter(), 1e-12);

  constexpr int kEpoch = 50;
  constexpr int kWindow = 200;
  double epoch_best = best_f;
  double window_best = best_f;
  int stalled_epochs = 0;
  int fallback_until = 0;
  int fallback_start = 0;
  bool converged = false;
  int iter = 0;

  for (iter = 1; iter <= config.max_iterations; ++iter) {
    double gn2 = grad.squaredNorm();
    if (gn2 <= 1e-28) {
      converged = true;
      break;
    }
    double step;
    if (iter < fallback_until) {
      // diminishing schedule while the Polyak target is stalled
      step = 0.25 * diam / (std::sqrt(double(iter - fallback_start + 1)) * std::sqrt(gn2));
    } else {
      step = (fx - (best_f - target_gap)) / gn2;
    }
    x = set.project(x - step * grad);
    fx = evaluate(x, grad);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }

    if (iter % kEpoch == 0) {
      double drop = epoch_best - best_f;
      if (drop < 0.5 * target_gap) target_gap = std::max(0.5 * target_gap, gap_floor);
      if (drop <= 0.0) {
        if (++stalled_epochs >= 2 && target_gap <= gap_floor * 1.001 &&
            iter >= fallback_until) {
          fallback_until = iter + kEpoch;
          fallback_start = iter;
          stalled_epochs = 0;
        }
      } else {
        stalled_epochs = 0;
      }
      // re-anchor wandering iterates
      if (fx > best_f + std::max(16.0 * target_gap, 1e-6 * (1.0 + std::abs(best_f)))) {
        x = best_x;
        fx = evaluate(x, grad);
      }
      epoch_best = best_f;
    }
    if (iter % kWindow == 0) {
      if (window_best - best_f < tol) {
        converged = true;
        break;
      }
      window_best = best_f;
    }
  }
  return {std::move(best_x), best_f, converged, std::min(iter, config.max_iterations)};
}

PenaltyLoopResult exact_penalty_loop(const ProblemInstance& instance,
                                     const CutPool& pool, PenaltyState& state,
                                     const Vector& warm_start,
                                     const InnerSolverConfig& config) {
  if (pool.empty()) throw std::invalid_argument("exact_penalty_loop: empty cut pool");
  Vector warm = warm_start;
  int escalations = 0;
  for (;;) {
    auto sol = solve_penalized(instance, pool, state, warm, config);
    double gap = pool.value(sol.x).value;
    if (gap <= state.epsilon + config.feasibility_tol) {
      return {std::move(sol.x), gap, escalations, sol.converged};
    }
    if (escalations >= kMaxEscalations) {
      throw std::runtime_error(
          "exact_penalty_loop: escalation cap reached; inner solver or "
          "monotonicity assumptions are likely violated");
    }
    state.escalate();
    ++escalations;
    warm = std::move(sol.x);
  }
}

}  // namespace bvi
