#include "bvi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bvi {

namespace {

void check_dim(int expected, const Vector& x, const char* what) {
  if (x.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("box: bounds must have equal positive dimension");
  }
  if (((upper - lower).array() < 0.0).any()) {
    throw std::invalid_argument("box: lower bound exceeds upper bound");
  }
  int d = static_cast<int>(lower.size());
  return FeasibleSet(Box{std::move(lower), std::move(upper)}, d);
}

FeasibleSet FeasibleSet::cube(int dim) {
  return box(Vector::Zero(dim), Vector::Ones(dim));
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw std::invalid_argument("ball: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  int d = static_cast<int>(center.size());
  return FeasibleSet(Ball{std::move(center), radius}, d);
}

FeasibleSet FeasibleSet::unit_ball(int dim) {
  return ball(Vector::Zero(dim), 1.0);
}

FeasibleSet FeasibleSet::simplex(int dim, double scale) {
  if (dim <= 0) throw std::invalid_argument("simplex: dimension must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("simplex: scale must be positive");
  return FeasibleSet(Simplex{dim, scale}, dim);
}

FeasibleSet FeasibleSet::cournot_firm(Vector capacity) {
  if (capacity.size() == 0 || (capacity.array() <= 0.0).any()) {
    throw std::invalid_argument("cournot_firm: capacities must be positive");
  }
  int d = 2 * static_cast<int>(capacity.size());
  return FeasibleSet(CournotFirm{std::move(capacity)}, d);
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> factors) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  int d = 0;
  for (const auto& f : factors) d += f.dim();
  return FeasibleSet(Product{std::move(factors)}, d);
}

bool FeasibleSet::is_product() const {
  return std::holds_alternative<Product>(data_);
}

const std::vector<FeasibleSet>& FeasibleSet::factors() const {
  return std::get<Product>(data_).factors;
}

Vector project_simplex(const Vector& v, double scale) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = u[0] - scale;  // always overwritten at i = 0 since scale > 0
  for (int i = 0; i < n; ++i) {
    cumsum += u[i];
    double t = (cumsum - scale) / (i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0);
}

Vector FeasibleSet::project(const Vector& x) const {
  check_dim(dim_, x, "project");
  if (const auto* b = std::get_if<Box>(&data_)) {
    return x.cwiseMax(b->lo).cwiseMin(b->hi);
  }
  if (const auto* b = std::get_if<Ball>(&data_)) {
    Vector d = x - b->center;
    double nrm = d.norm();
    if (nrm <= b->radius) return x;
    return b->center + (b->radius / nrm) * d;
  }
  if (const auto* s = std::get_if<Simplex>(&data_)) {
    return project_simplex(x, s->scale);
  }
  if (const auto* c = std::get_if<CournotFirm>(&data_)) {
    // min ||y - y0||^2 + ||s - s0||^2  s.t.  sum(s) = sum(y), 0 <= y <= B, s >= 0.
    // Dualizing the coupling constraint with multiplier mu gives
    //   y(mu) = clamp(y0 + mu, 0, B),  s(mu) = max(s0 - mu, 0),
    // and g(mu) = sum(s(mu)) - sum(y(mu)) is continuous and nonincreasing,
    // so the optimal mu is a bisection root.
    const int j = static_cast<int>(c->capacity.size());
    Vector y0 = x.head(j), s0 = x.tail(j);
    auto gap = [&](double mu) {
      double g = 0.0;
      for (int i = 0; i < j; ++i) {
        g += std::max(s0[i] - mu, 0.0);
        g -= std::clamp(y0[i] + mu, 0.0, c->capacity[i]);
      }
      return g;
    };
    double span = x.cwiseAbs().maxCoeff() + c->capacity.maxCoeff() + 1.0;
    double lo = -span, hi = span;
    while (gap(lo) < 0.0) lo *= 2.0;
    while (gap(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 128 && hi - lo > 1e-15 * span; ++it) {
      double mid = 0.5 * (lo + hi);
      (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    double mu = 0.5 * (lo + hi);
    Vector out(dim_);
    for (int i = 0; i < j; ++i) {
      out[i] = std::clamp(y0[i] + mu, 0.0, c->capacity[i]);
      out[j + i] = std::max(s0[i] - mu, 0.0);
    }
    // Snap the coupling constraint closed against bisection residue.
    double imbalance = out.tail(j).sum() - out.head(j).sum();
    if (imbalance != 0.0) {
      for (int i = 0; i < j && imbalance > 0.0; ++i) {
        double take = std::min(imbalance, out[j + i]);
        out[j + i] -= take;
        imbalance -= take;
      }
      for (int i = 0; i < j && imbalance < 0.0; ++i) {
        double room = std::min(-imbalance, c->capacity[i] - out[i]);
        out[i] += room;
        imbalance += room;
      }
    }
    return out;
  }
  const auto& p = std::get<Product>(data_);
  Vector out(dim_);
  int off = 0;
  for (const auto& f : p.factors) {
    out.segment(off, f.dim()) = f.project(x.segment(off, f.dim()));
    off += f.dim();
  }
  return out;
}

LinearArgmax FeasibleSet::linear_argmax(const Vector& c) const {
  check_dim(dim_, c, "linear_argmax");
  if (const auto* b = std::get_if<Box>(&data_)) {
    Vector y(dim_);
    for (int i = 0; i < dim_; ++i) y[i] = c[i] > 0.0 ? b->hi[i] : b->lo[i];
    return {y, c.dot(y)};
  }
  if (const auto* b = std::get_if<Ball>(&data_)) {
    double nrm = c.norm();
    if (nrm == 0.0) return {b->center, c.dot(b->center)};
    Vector y = b->center + (b->radius / nrm) * c;
    return {y, c.dot(b->center) + b->radius * nrm};
  }
  if (const auto* s = std::get_if<Simplex>(&data_)) {
    int imax = 0;
    c.maxCoeff(&imax);
    Vector y = Vector::Zero(dim_);
    y[imax] = s->scale;
    return {y, s->scale * c[imax]};
  }
  if (const auto* cf = std::get_if<CournotFirm>(&data_)) {
    // max <p, y> + <q, s>  over the firm polyhedron. All sales go to the
    // best location j*, and a location produces at capacity exactly when
    // its marginal value p_j + q_{j*} is positive.
    const int j = static_cast<int>(cf->capacity.size());
    Vector p = c.head(j), q = c.tail(j);
    int jstar = 0;
    q.maxCoeff(&jstar);
    Vector y = Vector::Zero(dim_);
    double total = 0.0, value = 0.0;
    for (int i = 0; i < j; ++i) {
      if (p[i] + q[jstar] > 0.0) {
        y[i] = cf->capacity[i];
        total += cf->capacity[i];
        value += p[i] * cf->capacity[i];
      }
    }
    y[j + jstar] = total;
    value += q[jstar] * total;
    return {y, value};
  }
  const auto& pr = std::get<Product>(data_);
  Vector y(dim_);
  double value = 0.0;
  int off = 0;
  for (const auto& f : pr.factors) {
    auto part = f.linear_argmax(c.segment(off, f.dim()));
    y.segment(off, f.dim()) = part.point;
    value += part.value;
    off += f.dim();
  }
  return {y, value};
}

double FeasibleSet::diameter() const {
  if (const auto* b = std::get_if<Box>(&data_)) return (b->hi - b->lo).norm();
  if (const auto* b = std::get_if<Ball>(&data_)) return 2.0 * b->radius;
  if (const auto* s = std::get_if<Simplex>(&data_)) {
    return s->dim >= 2 ? s->scale * std::sqrt(2.0) : 0.0;
  }
  if (const auto* c = std::get_if<CournotFirm>(&data_)) {
    // Bounding-box diameter: y_j in [0, B_j], s_j in [0, sum(B)].
    const int j = static_cast<int>(c->capacity.size());
    double total = c->capacity.sum();
    return std::sqrt(c->capacity.squaredNorm() + j * total * total);
  }
  double sq = 0.0;
  for (const auto& f : std::get<Product>(data_).factors) {
    double d = f.diameter();
    sq += d * d;
  }
  return std::sqrt(sq);
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  check_dim(dim_, x, "contains");
  if (tol < 0.0) throw std::invalid_argument("contains: tol must be nonnegative");
  if (const auto* b = std::get_if<Box>(&data_)) {
    return (x.array() >= b->lo.array() - tol).all() &&
           (x.array() <= b->hi.array() + tol).all();
  }
  if (const auto* b = std::get_if<Ball>(&data_)) {
    return (x - b->center).norm() <= b->radius + tol;
  }
  if (const auto* s = std::get_if<Simplex>(&data_)) {
    return (x.array() >= -tol).all() && std::abs(x.sum() - s->scale) <= tol;
  }
  if (const auto* c = std::get_if<CournotFirm>(&data_)) {
    const int j = static_cast<int>(c->capacity.size());
    return (x.array() >= -tol).all() &&
           (x.head(j).array() <= c->capacity.array() + tol).all() &&
           std::abs(x.tail(j).sum() - x.head(j).sum()) <= tol;
  }
  const auto& p = std::get<Product>(data_);
  int off = 0;
  for (const auto& f : p.factors) {
    if (!f.contains(x.segment(off, f.dim()), tol)) return false;
    off += f.dim();
  }
  return true;
}

Vector FeasibleSet::sample_uniform(Rng& rng) const {
  if (const auto* b = std::get_if<Box>(&data_)) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector x(dim_);
    for (int i = 0; i < dim_; ++i) x[i] = b->lo[i] + unif(rng) * (b->hi[i] - b->lo[i]);
    return x;
  }
  if (const auto* b = std::get_if<Ball>(&data_)) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector d(dim_);
    for (int i = 0; i < dim_; ++i) d[i] = gauss(rng);
    double nrm = d.norm();
    if (nrm == 0.0) return b->center;
    double r = b->radius * std::pow(unif(rng), 1.0 / dim_);
    return b->center + (r / nrm) * d;
  }
  if (const auto* s = std::get_if<Simplex>(&data_)) {
    // Dirichlet(1,...,1): normalized i.i.d. exponentials.
    std::exponential_distribution<double> expo(1.0);
    Vector x(dim_);
    for (int i = 0; i < dim_; ++i) x[i] = expo(rng);
    return (s->scale / x.sum()) * x;
  }
  if (const auto* c = std::get_if<CournotFirm>(&data_)) {
    const int j = static_cast<int>(c->capacity.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector x(dim_);
    double total = c->capacity.sum();
    for (int i = 0; i < j; ++i) x[i] = unif(rng) * c->capacity[i];
    for (int i = 0; i < j; ++i) x[j + i] = unif(rng) * total;
    return project(x);
  }
  const auto& p = std::get<Product>(data_);
  Vector x(dim_);
  int off = 0;
  for (const auto& f : p.factors) {
    x.segment(off, f.dim()) = f.sample_uniform(rng);
    off += f.dim();
  }
  return x;
}

std::pair<Vector, Vector> FeasibleSet::bounding_box() const {
  if (const auto* b = std::get_if<Box>(&data_)) return {b->lo, b->hi};
  if (const auto* b = std::get_if<Ball>(&data_)) {
    return {b->center.array() - b->radius, b->center.array() + b->radius};
  }
  if (const auto* s = std::get_if<Simplex>(&data_)) {
    return {Vector::Zero(dim_), Vector::Constant(dim_, s->scale)};
  }
  if (const auto* c = std::get_if<CournotFirm>(&data_)) {
    const int j = static_cast<int>(c->capacity.size());
    Vector lo = Vector::Zero(dim_), hi(dim_);
    hi.head(j) = c->capacity;
    hi.tail(j).setConstant(c->capacity.sum());
    return {lo, hi};
  }
  const auto& p = std::get<Product>(data_);
  Vector lo(dim_), hi(dim_);
  int off = 0;
  for (const auto& f : p.factors) {
    auto bb = f.bounding_box();
    lo.segment(off, f.dim()) = bb.first;
    hi.segment(off, f.dim()) = bb.second;
    off += f.dim();
  }
  return {lo, hi};
}

}  // namespace bvi
