#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bvi/problem.hpp"

namespace bvi {

struct GapPoint {
  double value;
  Vector maximizer;
};

/// psi_S(x) = max{<G(x), x - y> : y in C} via one linear maximization.
/// Requires x in C (tolerance 1e-6); the value is nonnegative there.
GapPoint stampacchia_gap(const Operator& op, const FeasibleSet& set, const Vector& x);

struct MintyPoint {
  double value;       // <G(y*), x - y*> at the returned feasible maximizer
  Vector maximizer;   // y* in C
  double gap_bound;   // certified bound: sup <= value + gap_bound
  int iterations;
};

/// psi_M(x) = max{<G(y), x - y> : y in C} for affine monotone G, where the
/// inner problem is a concave quadratic. Solved by accelerated projected
/// gradient; termination is certified through the linear-maximization
/// (Frank-Wolfe) gap, so sup - value <= tol on return.
MintyPoint minty_gap_affine(const Operator& op, const FeasibleSet& set,
                            const Vector& x, double tol);

/// Finite cut set B = {y_0, ..., y_k} with cached operator values,
/// realizing the outer approximation psi_M_B and its subgradients.
/// One writer (add), concurrent readers between writes.
class CutPool {
 public:
  explicit CutPool(FeasibleSet domain);

  /// Appends y (projected onto the domain) with cached G(y) and <G(y), y>.
  /// Returns the index of the new cut, or of an existing duplicate within
  /// 1e-10. Throws if y is farther than 1e-6 from the domain.
  int add(const Vector& y, const Operator& op);

  struct Eval {
    double value;
    int active_index;  // smallest attaining index
  };
  /// max_i <g_i, x> - <g_i, y_i>. May be negative outside the cut set.
  Eval value(const Vector& x) const;

  /// g_i for the active index: one subgradient of psi_M_B at x.
  Vector subgradient(const Vector& x) const;

  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const FeasibleSet& domain() const { return domain_; }
  const Vector& cut(int i) const;
  Vector cut_operator(int i) const;
  double cut_offset(int i) const;

 private:
  FeasibleSet domain_;
  std::vector<Vector> cuts_;
  Matrix gmat_;     // row i holds G(y_i); rows beyond count_ are capacity
  Vector offsets_;  // <G(y_i), y_i>
  int count_ = 0;
};

enum class RegionLabel { SFeasible, MFeasibleOnly, Infeasible };
const char* to_string(RegionLabel label);

struct RegionPoint {
  double x1, x2;
  double psi_s;
  double psi_m;  // exact for affine operators, dense-grid oracle otherwise
  RegionLabel label;
};

/// Labels a grid over a 2-dimensional set by epsilon-feasibility:
/// psi_S <= eps, else psi_M <= eps, else infeasible. The Minty values come
/// from minty_gap_affine when the operator is affine and from a 10^4-point
/// grid oracle otherwise.
std::vector<RegionPoint> classify_epsilon_region(const Operator& op,
                                                 const FeasibleSet& set,
                                                 double eps, int grid);

/// CSV with header x1,x2,psi_S,psi_M_oracle,label.
void write_region_csv(std::ostream& out, const std::vector<RegionPoint>& rows);

}  // namespace bvi
