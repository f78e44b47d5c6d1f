#include "bvi/gap.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bvi {

GapPoint stampacchia_gap(const Operator& op, const FeasibleSet& set, const Vector& x) {
  if (!set.contains(x, 1e-6)) {
    throw std::invalid_argument("stampacchia_gap: point is not feasible");
  }
  Vector g = op(x);
  auto max_neg = set.linear_argmax(-g);  // minimizes <g, y>
  return {g.dot(x) + max_neg.value, std::move(max_neg.point)};
}

MintyPoint minty_gap_affine(const Operator& op, const FeasibleSet& set,
                            const Vector& x, double tol) {
  if (!op.is_affine()) {
    throw std::invalid_argument("minty_gap_affine: operator must be affine");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("minty_gap_affine: tol must be positive");
  const Matrix& m = op.affine_matrix();
  const Vector& b = op.affine_offset();
  if (x.size() != m.rows()) throw std::invalid_argument("minty_gap_affine: dimension mismatch");

  // phi(y) = <My + b, x - y> = -y'Sy + <M'x - b, y> + <b, x> with
  // S = (M + M')/2; concave exactly when G is monotone.
  Matrix s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const double lam_min = eig.eigenvalues().minCoeff();
  const double lam_max = eig.eigenvalues().maxCoeff();
  const double mono_slack = 1e-9 * std::max(1.0, std::abs(lam_max));
  if (lam_min < -mono_slack) {
    throw std::invalid_argument("minty_gap_affine: affine operator is not monotone");
  }

  const Vector lin = m.transpose() * x - b;  // gradient of phi is -2Sy + lin
  const double constant = b.dot(x);
  auto phi = [&](const Vector& y) { return -y.dot(s * y) + lin.dot(y) + constant; };

  // Degenerate quadratic part: phi is linear, one oracle call is exact.
  if (lam_max <= 1e-14 * std::max(1.0, lin.norm())) {
    auto opt = set.linear_argmax(lin);
    return {opt.value + constant, std::move(opt.point), 0.0, 0};
  }

  const double lip = 2.0 * lam_max;
  Vector y = set.project(x);
  Vector z = y;
  double t_acc = 1.0;
  Vector best_y = y;
  double best_val = phi(y);
  int it = 0;
  double cert = std::numeric_limits<double>::infinity();
  const int max_iter = 200000;
  for (; it < max_iter; ++it) {
    Vector grad = 2.0 * (s * z) - lin;  // gradient of -phi
    Vector y_next = set.project(z - grad / lip);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    z = y_next + ((t_acc - 1.0) / t_next) * (y_next - y);
    double val = phi(y_next);
    if (val < phi(y)) {  // adaptive restart on non-improvement
      z = y_next;
      t_next = 1.0;
    }
    y = y_next;
    t_acc = t_next;
    if (val > best_val) {
      best_val = val;
      best_y = y;
    }
    if (it % 4 == 0) {
      Vector g_best = 2.0 * (s * best_y) - lin;
      auto la = set.linear_argmax(-g_best);
      cert = g_best.dot(best_y) + la.value;  // max_z <-g, z - y>, >= sup(phi) - phi(y)
      if (cert <= tol) break;
    }
  }
  return {best_val, std::move(best_y), std::max(cert, 0.0), it};
}

CutPool::CutPool(FeasibleSet domain) : domain_(std::move(domain)) {}

int CutPool::add(const Vector& y, const Operator& op) {
  if (!domain_.contains(y, 1e-6)) {
    throw std::invalid_argument("CutPool::add: cut point is not feasible");
  }
  Vector yp = domain_.project(y);  // keep B inside C against roundoff
  for (int i = 0; i < count_; ++i) {
    if ((cuts_[i] - yp).norm() <= 1e-10) return i;
  }
  Vector g = op(yp);
  if (count_ == gmat_.rows()) {
    int cap = std::max(8, 2 * count_);
    gmat_.conservativeResize(cap, domain_.dim());
    offsets_.conservativeResize(cap);
  }
  gmat_.row(count_) = g.transpose();
  offsets_[count_] = g.dot(yp);
  cuts_.push_back(std::move(yp));
  return count_++;
}

CutPool::Eval CutPool::value(const Vector& x) const {
  if (count_ == 0) throw std::logic_error("CutPool::value: empty pool");
  Eigen::Index idx = 0;
  double v = (gmat_.topRows(count_) * x - offsets_.head(count_)).maxCoeff(&idx);
  return {v, static_cast<int>(idx)};
}

Vector CutPool::subgradient(const Vector& x) const {
  return cut_operator(value(x).active_index);
}

const Vector& CutPool::cut(int i) const { return cuts_.at(i); }

Vector CutPool::cut_operator(int i) const {
  if (i < 0 || i >= count_) throw std::out_of_range("CutPool::cut_operator");
  return gmat_.row(i).transpose();
}

double CutPool::cut_offset(int i) const {
  if (i < 0 || i >= count_) throw std::out_of_range("CutPool::cut_offset");
  return offsets_[i];
}

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::SFeasible: return "S-feasible";
    case RegionLabel::MFeasibleOnly: return "M-feasible-only";
    case RegionLabel::Infeasible: return "infeasible";
  }
  return "?";
}

std::vector<RegionPoint> classify_epsilon_region(const Operator& op,
                                                 const FeasibleSet& set,
                                                 double eps, int grid) {
  if (set.dim() != 2) {
    throw std::invalid_argument("classify_epsilon_region: set must be 2-dimensional");
  }
  if (grid < 2) throw std::invalid_argument("classify_epsilon_region: grid too small");
  auto [lo, hi] = set.bounding_box();

  const bool affine = op.is_affine();
  // Grid oracle for the non-affine case: cache G over ~10^4 feasible points.
  Matrix oracle_g;
  Vector oracle_off;
  if (!affine) {
    const int side = 100;
    std::vector<Vector> pts;
    pts.reserve(side * side);
    for (int i = 0; i < side; ++i) {
      for (int j = 0; j < side; ++j) {
        Vector y(2);
        y << lo[0] + (hi[0] - lo[0]) * i / (side - 1.0),
            lo[1] + (hi[1] - lo[1]) * j / (side - 1.0);
        if (set.contains(y, 1e-9)) pts.push_back(std::move(y));
      }
    }
    oracle_g.resize(static_cast<Eigen::Index>(pts.size()), 2);
    oracle_off.resize(static_cast<Eigen::Index>(pts.size()));
    for (size_t k = 0; k < pts.size(); ++k) {
      Vector g = op(pts[k]);
      oracle_g.row(static_cast<Eigen::Index>(k)) = g.transpose();
      oracle_off[static_cast<Eigen::Index>(k)] = g.dot(pts[k]);
    }
  }

  std::vector<RegionPoint> rows;
  rows.reserve(static_cast<size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Vector x(2);
      x << lo[0] + (hi[0] - lo[0]) * i / (grid - 1.0),
          lo[1] + (hi[1] - lo[1]) * j / (grid - 1.0);
      if (!set.contains(x, 1e-9)) continue;
      double psi_s = stampacchia_gap(op, set, x).value;
      double psi_m;
      if (affine) {
        psi_m = minty_gap_affine(op, set, x, std::max(1e-10, 1e-6 * eps)).value;
      } else {
        psi_m = (oracle_g * x - oracle_off).maxCoeff();
      }
      RegionLabel label = psi_s <= eps  ? RegionLabel::SFeasible
                          : psi_m <= eps ? RegionLabel::MFeasibleOnly
                                         : RegionLabel::Infeasible;
      rows.push_back({x[0], x[1], psi_s, psi_m, label});
    }
  }
  return rows;
}

void write_region_csv(std::ostream& out, const std::vector<RegionPoint>& rows) {
  out << "x1,x2,psi_S,psi_M_oracle,label\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%s\n", r.x1, r.x2,
                  r.psi_s, r.psi_m, to_string(r.label));
    out << buf;
  }
}

}  // namespace bvi
