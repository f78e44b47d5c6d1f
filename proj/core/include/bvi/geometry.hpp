#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "bvi/types.hpp"

namespace bvi {

/// Result of maximizing a linear functional over a feasible set.
struct LinearArgmax {
  Vector point;
  double value;
};

/// Convex compact feasible set with projection, linear-maximization,
/// diameter, membership and sampling oracles.
///
/// Supported kinds: axis-aligned box, Euclidean ball, scaled standard
/// simplex, the single-firm production/sales polyhedron used by the
/// network Cournot model, and Cartesian products of the above.
/// Immutable after construction; all oracles are pure.
class FeasibleSet {
 public:
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet cube(int dim);  // [0,1]^dim
  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet unit_ball(int dim);
  static FeasibleSet simplex(int dim, double scale = 1.0);
  /// {(y, s) in R^{2J} : sum(s) = sum(y), 0 <= y <= capacity, s >= 0}
  static FeasibleSet cournot_firm(Vector capacity);
  static FeasibleSet product(std::vector<FeasibleSet> factors);

  int dim() const { return dim_; }

  /// Euclidean projection onto the set. Exact for every kind (the firm
  /// polyhedron uses a dual bisection on the single coupling constraint).
  Vector project(const Vector& x) const;

  /// Maximizes <c, y> over the set; returns the maximizer and the value.
  LinearArgmax linear_argmax(const Vector& c) const;

  /// Euclidean diameter. Exact for box/ball/simplex and their products;
  /// an upper bound (bounding-box diameter) for the firm polyhedron.
  double diameter() const;

  /// True iff all defining constraints hold within tol.
  bool contains(const Vector& x, double tol) const;

  /// A point of the set. Uniform for box and ball, Dirichlet(1,...,1) for
  /// the simplex, componentwise-then-project for the firm polyhedron.
  Vector sample_uniform(Rng& rng) const;

  /// Componentwise bounds enclosing the set.
  std::pair<Vector, Vector> bounding_box() const;

  bool is_product() const;
  const std::vector<FeasibleSet>& factors() const;

 private:
  struct Box {
    Vector lo, hi;
  };
  struct Ball {
    Vector center;
    double radius;
  };
  struct Simplex {
    int dim;
    double scale;
  };
  struct CournotFirm {
    Vector capacity;  // J locations; variables are (y, s) in R^{2J}
  };
  struct Product {
    std::vector<FeasibleSet> factors;
  };
  using Data = std::variant<Box, Ball, Simplex, CournotFirm, Product>;

  FeasibleSet(Data data, int dim) : data_(std::move(data)), dim_(dim) {}

  Data data_;
  int dim_ = 0;
};

/// Projects v onto {x >= 0, sum(x) = scale} by sort-and-threshold.
Vector project_simplex(const Vector& v, double scale);

}  // namespace bvi
