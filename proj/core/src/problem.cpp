#include "bvi/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace bvi {

namespace {

void check_dim(int expected, const Vector& x, const char* what) {
  if (x.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

constexpr double kPowerClamp = 1e-12;  // guards t^(sigma-1) at t = 0 for sigma < 1

}  // namespace

void CournotMarket::validate() const {
  if (firms <= 0 || locations <= 0) {
    throw std::invalid_argument("cournot market: firms and locations must be positive");
  }
  if (a.size() != locations || b.size() != locations) {
    throw std::invalid_argument("cournot market: a, b must have one entry per location");
  }
  if (capacity.rows() != firms || capacity.cols() != locations ||
      cost.rows() != firms || cost.cols() != locations) {
    throw std::invalid_argument("cournot market: capacity and cost must be firms x locations");
  }
  if ((capacity.array() <= 0.0).any()) {
    throw std::invalid_argument("cournot market: capacities must be positive");
  }
}

double CournotMarket::price(int j, double total) const {
  double t = std::max(total, 0.0);
  return a[j] - b[j] * std::pow(t, sigma);
}

double CournotMarket::price_derivative(int j, double total) const {
  double t = std::max(total, kPowerClamp);
  return -b[j] * sigma * std::pow(t, sigma - 1.0);
}

Vector CournotMarket::location_totals(const Vector& x) const {
  const int jn = locations;
  Vector totals = Vector::Zero(jn);
  for (int i = 0; i < firms; ++i) {
    totals += x.segment(i * 2 * jn + jn, jn);
  }
  return totals;
}

double CournotMarket::welfare(const Vector& x) const {
  check_dim(dim(), x, "welfare");
  const int jn = locations;
  Vector totals = location_totals(x);
  double w = 0.0;
  for (int j = 0; j < jn; ++j) w += totals[j] * price(j, totals[j]);
  for (int i = 0; i < firms; ++i) {
    w -= cost.row(i).dot(x.segment(i * 2 * jn, jn));
  }
  return w;
}

Vector CournotMarket::welfare_gradient(const Vector& x) const {
  check_dim(dim(), x, "welfare_gradient");
  const int jn = locations;
  Vector totals = location_totals(x);
  Vector g(dim());
  for (int i = 0; i < firms; ++i) {
    for (int j = 0; j < jn; ++j) {
      g[i * 2 * jn + j] = -cost(i, j);
      g[i * 2 * jn + jn + j] =
          price(j, totals[j]) + totals[j] * price_derivative(j, totals[j]);
    }
  }
  return g;
}

Vector CournotMarket::equilibrium_operator(const Vector& x) const {
  check_dim(dim(), x, "equilibrium_operator");
  const int jn = locations;
  Vector totals = location_totals(x);
  Vector g(dim());
  for (int i = 0; i < firms; ++i) {
    for (int j = 0; j < jn; ++j) {
      double sij = x[i * 2 * jn + jn + j];
      g[i * 2 * jn + j] = cost(i, j);
      g[i * 2 * jn + jn + j] =
          -price(j, totals[j]) - sij * price_derivative(j, totals[j]);
    }
  }
  return g;
}

FeasibleSet CournotMarket::feasible_set() const {
  validate();
  std::vector<FeasibleSet> firms_sets;
  firms_sets.reserve(firms);
  for (int i = 0; i < firms; ++i) {
    firms_sets.push_back(FeasibleSet::cournot_firm(capacity.row(i).transpose()));
  }
  return FeasibleSet::product(std::move(firms_sets));
}

Operator Operator::affine(Matrix m, Vector b) {
  if (m.rows() != m.cols() || m.rows() != b.size() || b.size() == 0) {
    throw std::invalid_argument("affine operator: M must be square and match b");
  }
  int d = static_cast<int>(b.size());
  return Operator(Affine{std::move(m), std::move(b)}, d);
}

Operator Operator::linear_plus_exponential(Matrix m, Vector b, Vector alpha,
                                           Vector beta, int tail_dim) {
  const int head = static_cast<int>(m.rows());
  if (m.rows() != m.cols() || head == 0) {
    throw std::invalid_argument("linexp operator: M must be square and nonempty");
  }
  if (b.size() != head || alpha.size() != head || beta.size() != head) {
    throw std::invalid_argument("linexp operator: b, alpha, beta must match M");
  }
  if (tail_dim < 0) throw std::invalid_argument("linexp operator: negative tail");
  if ((alpha.array() <= 0.0).any() || (beta.array() <= 0.0).any()) {
    throw std::invalid_argument("linexp operator: alpha, beta must be positive");
  }
  return Operator(LinExp{std::move(m), std::move(b), std::move(alpha),
                         std::move(beta), tail_dim},
                  head + tail_dim);
}

Operator Operator::cournot_gradient(CournotMarket market) {
  market.validate();
  int d = market.dim();
  return Operator(std::move(market), d);
}

Operator Operator::callable(int dim, std::function<Vector(const Vector&)> fn) {
  if (dim <= 0) throw std::invalid_argument("callable operator: dimension must be positive");
  return Operator(Callable{std::move(fn)}, dim);
}

Vector Operator::operator()(const Vector& x) const {
  check_dim(dim_, x, "operator eval");
  if (const auto* a = std::get_if<Affine>(&data_)) {
    return a->m * x + a->b;
  }
  if (const auto* le = std::get_if<LinExp>(&data_)) {
    const int head = static_cast<int>(le->m.rows());
    Vector out = Vector::Zero(dim_);
    out.head(head) = le->m * x.head(head) + le->b +
                     (le->alpha.array() * (le->beta.array() * x.head(head).array()).exp())
                         .matrix();
    return out;
  }
  if (const auto* mk = std::get_if<CournotMarket>(&data_)) {
    return mk->equilibrium_operator(x);
  }
  return std::get<Callable>(data_).fn(x);
}

bool Operator::is_affine() const { return std::holds_alternative<Affine>(data_); }

const Matrix& Operator::affine_matrix() const {
  if (const auto* a = std::get_if<Affine>(&data_)) return a->m;
  throw std::logic_error("affine_matrix: operator is not affine");
}

const Vector& Operator::affine_offset() const {
  if (const auto* a = std::get_if<Affine>(&data_)) return a->b;
  throw std::logic_error("affine_offset: operator is not affine");
}

Operator& Operator::with_lipschitz(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("lipschitz constant must be positive");
  lipschitz_ = value;
  return *this;
}

Objective Objective::quadratic(Matrix q, Vector center) {
  if (q.rows() != q.cols() || q.rows() != center.size() || center.size() == 0) {
    throw std::invalid_argument("quadratic objective: Q must be square and match center");
  }
  double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if (((q - q.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale) {
    throw std::invalid_argument("quadratic objective: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("quadratic objective: Q must be positive definite");
  }
  int d = static_cast<int>(center.size());
  return Objective(Quadratic{std::move(q), std::move(center)}, d);
}

Objective Objective::negated_cournot_welfare(CournotMarket market) {
  market.validate();
  int d = market.dim();
  return Objective(std::move(market), d);
}

Objective Objective::callable(int dim, std::function<double(const Vector&)> value,
                              std::function<Vector(const Vector&)> subgradient) {
  if (dim <= 0) throw std::invalid_argument("callable objective: dimension must be positive");
  return Objective(Callable{std::move(value), std::move(subgradient)}, dim);
}

double Objective::value(const Vector& x) const {
  check_dim(dim_, x, "objective value");
  if (const auto* q = std::get_if<Quadratic>(&data_)) {
    Vector d = x - q->center;
    return d.dot(q->q * d);
  }
  if (const auto* mk = std::get_if<CournotMarket>(&data_)) {
    return -mk->welfare(x);
  }
  return std::get<Callable>(data_).value(x);
}

Vector Objective::subgradient(const Vector& x) const {
  check_dim(dim_, x, "objective subgradient");
  if (const auto* q = std::get_if<Quadratic>(&data_)) {
    return 2.0 * (q->q * (x - q->center));
  }
  if (const auto* mk = std::get_if<CournotMarket>(&data_)) {
    return -mk->welfare_gradient(x);
  }
  return std::get<Callable>(data_).subgradient(x);
}

void ProblemInstance::validate() const {
  if (op.dim() != set.dim() || objective.dim() != set.dim()) {
    throw std::invalid_argument("problem instance: dimensions disagree");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("problem instance: epsilon must be strictly positive");
  }
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()[0];
}

namespace {

// Local difference quotients around p, refined by power iteration on the
// Jacobian via central differences. Records the max ratio along the path.
double probe_local_ratio(const Operator& op, const FeasibleSet& set,
                         const Vector& p0, Vector dir, int iters, double step) {
  Vector p = set.project(p0);
  double nrm = dir.norm();
  if (nrm < 1e-300) return 0.0;
  Vector v = dir / nrm;
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector w = op(p + step * v) - op(p - step * v);
    double wn = w.norm();
    best = std::max(best, wn / (2.0 * step));
    if (wn < 1e-300) break;
    v = w / wn;
  }
  return best;
}

}  // namespace

double estimate_lipschitz(const Operator& op, const FeasibleSet& set,
                          int samples, Rng& rng) {
  if (op.is_affine()) return spectral_norm(op.affine_matrix());
  if (samples < 2) throw std::invalid_argument("estimate_lipschitz: samples >= 2 required");

  const int n = op.dim();
  const double diam = std::max(set.diameter(), 1e-12);
  const double step = 1e-5 * diam;
  double best = 0.0;

  // Deterministic probes at extreme points, independent of the sample count.
  Vector ones = Vector::Ones(n);
  best = std::max(best, probe_local_ratio(op, set, set.linear_argmax(ones).point,
                                          ones, 16, step));
  best = std::max(best, probe_local_ratio(op, set, set.linear_argmax(-ones).point,
                                          ones, 16, step));
  const int probe_coords = std::min(n, 16);
  for (int i = 0; i < probe_coords; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    best = std::max(best,
                    probe_local_ratio(op, set, set.linear_argmax(e).point, ones, 10, step));
  }

  // Sampled pairs; every eighth point also seeds a local refinement.
  Vector prev = set.sample_uniform(rng);
  for (int i = 0; i < samples; ++i) {
    Vector cur = set.sample_uniform(rng);
    double dist = (cur - prev).norm();
    if (dist > 1e-14) {
      best = std::max(best, (op(cur) - op(prev)).norm() / dist);
    }
    if (i % 8 == 0) {
      Vector dir = dist > 1e-14 ? Vector(cur - prev) : ones;
      best = std::max(best, probe_local_ratio(op, set, cur, dir, 6, step));
    }
    prev = cur;
  }
  return 1.5 * best;
}

bool check_monotone(const Operator& op, const FeasibleSet& set, int pairs,
                    Rng& rng, double tol) {
  if (op.is_affine()) {
    const Matrix& m = op.affine_matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    return eig.eigenvalues().minCoeff() >= -tol;
  }
  for (int i = 0; i < pairs; ++i) {
    Vector x = set.sample_uniform(rng);
    Vector y = set.sample_uniform(rng);
    if ((op(x) - op(y)).dot(x - y) < -tol) return false;
  }
  return true;
}

}  // namespace bvi
