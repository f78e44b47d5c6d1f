#pragma once

#include <functional>

#include "bvi/problem.hpp"

namespace bvi {

struct LineSearchBudget {
  int max_evaluations = 200;
  double refinement_tol = 1e-6;  // on lambda
};

struct LineSearchResult {
  double lambda;  // in [0, 1]
  double value;
  int evaluations;
};

/// Deterministic global maximization of phi on [0,1]: a 33-point uniform
/// grid, DIRECT-style trisection of the most promising intervals, then
/// golden-section refinement around the incumbent. Endpoints are always
/// evaluated; returns the best evaluated point.
LineSearchResult global_max_1d(const std::function<double(double)>& phi,
                               const LineSearchBudget& budget);

/// phi(lambda) = lambda * <G(x + lambda (y_bar - x)), x - y_bar>; the
/// objective of the cut line search. phi(0) = 0 always.
std::function<double(double)> build_phi(const Operator& op, const Vector& x,
                                        const Vector& y_bar);

}  // namespace bvi
