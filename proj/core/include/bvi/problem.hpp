#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "bvi/geometry.hpp"
#include "bvi/types.hpp"

namespace bvi {

/// Parameters of the network Cournot model: N firms produce and sell one
/// good across J locations. Firm i's decision block is x^(i) = (y_i, s_i)
/// in R^{2J} (production, sales); the inverse demand at location j is
/// p_j(t) = a_j - b_j t^sigma.
struct CournotMarket {
  int firms = 0;
  int locations = 0;
  double sigma = 1.0;
  Vector a;         // J
  Vector b;         // J
  Matrix capacity;  // N x J
  Matrix cost;      // N x J

  int dim() const { return 2 * firms * locations; }
  void validate() const;

  double price(int j, double total) const;
  double price_derivative(int j, double total) const;

  /// Total sales per location, S_j = sum_i s_ij.
  Vector location_totals(const Vector& x) const;

  /// Sum of firm profits, sum_j S_j p_j(S_j) - sum_ij c_ij y_ij.
  double welfare(const Vector& x) const;
  Vector welfare_gradient(const Vector& x) const;

  /// Blockwise -grad_{x^(i)} g_i: production entries c_ij, sales entries
  /// -p_j(S_j) - s_ij p_j'(S_j). Its zeros on the product set are the
  /// Nash-Cournot equilibria.
  Vector equilibrium_operator(const Vector& x) const;

  /// Product of the per-firm polyhedra.
  FeasibleSet feasible_set() const;
};

/// The lower-level map G. Monotone on the feasible set by contract;
/// affine operators expose their matrix for exact computations.
class Operator {
 public:
  static Operator affine(Matrix m, Vector b);

  /// G(x) = (M 0; 0 0) x + (b; 0) + (alpha .* exp(beta .* x_head); 0)
  /// with a zero tail of width `tail_dim`.
  static Operator linear_plus_exponential(Matrix m, Vector b, Vector alpha,
                                          Vector beta, int tail_dim);
  static Operator cournot_gradient(CournotMarket market);
  static Operator callable(int dim, std::function<Vector(const Vector&)> fn);

  Vector operator()(const Vector& x) const;
  int dim() const { return dim_; }

  bool is_affine() const;
  const Matrix& affine_matrix() const;
  const Vector& affine_offset() const;

  std::optional<double> lipschitz_constant() const { return lipschitz_; }
  Operator& with_lipschitz(double value);

 private:
  struct Affine {
    Matrix m;
    Vector b;
  };
  struct LinExp {
    Matrix m;  // (n-l) x (n-l)
    Vector b, alpha, beta;
    int tail;
  };
  struct Callable {
    std::function<Vector(const Vector&)> fn;
  };
  using Data = std::variant<Affine, LinExp, CournotMarket, Callable>;

  Operator(Data data, int dim) : data_(std::move(data)), dim_(dim) {}

  Data data_;
  int dim_ = 0;
  std::optional<double> lipschitz_;
};

/// The upper-level objective f, convex by contract.
class Objective {
 public:
  /// f(x) = <x - u, Q (x - u)> with Q symmetric positive definite
  /// (both checked at construction).
  static Objective quadratic(Matrix q, Vector center);

  /// f(x) = -welfare(x); the library minimizes, welfare is maximized.
  static Objective negated_cournot_welfare(CournotMarket market);
  static Objective callable(int dim, std::function<double(const Vector&)> value,
                            std::function<Vector(const Vector&)> subgradient);

  double value(const Vector& x) const;
  Vector subgradient(const Vector& x) const;
  int dim() const { return dim_; }

 private:
  struct Quadratic {
    Matrix q;
    Vector center;
  };
  struct Callable {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> subgradient;
  };
  using Data = std::variant<Quadratic, CournotMarket, Callable>;

  Objective(Data data, int dim) : data_(std::move(data)), dim_(dim) {}

  Data data_;
  int dim_ = 0;
};

struct ProblemInstance {
  Operator op;
  Objective objective;
  FeasibleSet set;
  double epsilon;  // lower-level inexactness, strictly positive

  void validate() const;
};

double spectral_norm(const Matrix& m);

/// For affine operators: the exact spectral norm of the matrix.
/// Otherwise 1.5x the largest difference quotient ||G(u)-G(v)||/||u-v||
/// over a pair stream mixing uniform far pairs, power-iteration-refined
/// close pairs, and deterministic probes at extreme points of the set.
/// Nondecreasing in `samples` for a fixed random stream.
double estimate_lipschitz(const Operator& op, const FeasibleSet& set,
                          int samples, Rng& rng);

/// Monotonicity check: exact PSD test of the symmetric part for affine
/// operators, sampled pairs <G(x)-G(y), x-y> >= -tol otherwise.
bool check_monotone(const Operator& op, const FeasibleSet& set, int pairs,
                    Rng& rng, double tol = 1e-9);

}  // namespace bvi
