#include "bvi/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace bvi {

LineSearchResult global_max_1d(const std::function<double(double)>& phi,
                               const LineSearchBudget& budget) {
  if (budget.max_evaluations < 3) {
    throw std::invalid_argument("global_max_1d: need at least 3 evaluations");
  }
  const int max_ev = budget.max_evaluations;
  const double rtol = std::max(budget.refinement_tol, 1e-14);

  std::map<double, double> seen;
  int evals = 0;
  double best_lam = 0.0, best_val = -std::numeric_limits<double>::infinity();
  auto eval = [&](double lam) {
    lam = std::clamp(lam, 0.0, 1.0);
    auto it = seen.find(lam);
    if (it != seen.end()) return it->second;
    double v = phi(lam);
    ++evals;
    seen.emplace(lam, v);
    if (v > best_val || (v == best_val && lam < best_lam)) {
      best_val = v;
      best_lam = lam;
    }
    return v;
  };

  // Phase 1: uniform grid (endpoints included).
  const int grid = std::min(33, max_ev);
  for (int i = 0; i < grid; ++i) eval(double(i) / (grid - 1));

  // Phase 2: trisect the interval with the best upper-bound score, where the
  // score is the larger endpoint value plus an observed-slope width bonus.
  struct Interval {
    double a, b, fa, fb;
  };
  std::vector<Interval> ivs;
  {
    auto it = seen.begin();
    auto prev = it++;
    for (; it != seen.end(); ++it, ++prev) {
      ivs.push_back({prev->first, it->first, prev->second, it->second});
    }
  }
  double slope = 1.0;
  for (const auto& iv : ivs) {
    if (iv.b > iv.a) slope = std::max(slope, std::abs(iv.fb - iv.fa) / (iv.b - iv.a));
  }
  const int trisect_budget = max_ev - std::max(10, max_ev / 4);  // reserve for phase 3
  while (evals + 2 <= trisect_budget) {
    size_t pick = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ivs.size(); ++i) {
      double w = ivs[i].b - ivs[i].a;
      double score = std::max(ivs[i].fa, ivs[i].fb) + slope * w;
      if (score > best_score) {
        best_score = score;
        pick = i;
      }
    }
    Interval iv = ivs[pick];
    if (iv.b - iv.a < rtol) break;
    double m1 = iv.a + (iv.b - iv.a) / 3.0;
    double m2 = iv.a + 2.0 * (iv.b - iv.a) / 3.0;
    double f1 = eval(m1), f2 = eval(m2);
    double w3 = (iv.b - iv.a) / 3.0;
    slope = std::max({slope, std::abs(f1 - iv.fa) / w3, std::abs(f2 - f1) / w3,
                      std::abs(iv.fb - f2) / w3});
    ivs[pick] = {iv.a, m1, iv.fa, f1};
    ivs.push_back({m1, m2, f1, f2});
    ivs.push_back({m2, iv.b, f2, iv.fb});
  }

  // Phase 3: golden-section around the incumbent, bracketed by neighbors.
  {
    auto it = seen.find(best_lam);
    double lo = 0.0, hi = 1.0;
    if (it != seen.begin()) lo = std::prev(it)->first;
    if (std::next(it) != seen.end()) hi = std::next(it)->first;
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > rtol && evals < max_ev) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = eval(d);
      }
    }
  }
  return {best_lam, best_val, evals};
}

std::function<double(double)> build_phi(const Operator& op, const Vector& x,
                                        const Vector& y_bar) {
  if (x.size() != op.dim() || y_bar.size() != op.dim()) {
    throw std::invalid_argument("build_phi: dimension mismatch");
  }
  Vector dir = y_bar - x;
  Vector back = x - y_bar;
  return [op, x, dir, back](double lambda) {
    return lambda * op(x + lambda * dir).dot(back);
  };
}

}  // namespace bvi
