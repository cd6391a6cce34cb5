#pragma once

// One-dimensional solvers shared by the threshold and replica modules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "spiked/errors.hpp"

namespace spiked::numeric {

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

struct Root {
  double x = 0.0;
  double residual = 0.0;  // |f(x)|
  int iterations = 0;
};

/// Bisection on a sign change of `f` over [lo, hi].
///
/// Stops once the bracket is narrower than `tol` (absolute) or after
/// `max_iter` halvings. When `geometric` is set and both ends are positive the
/// midpoint is the geometric mean, which resolves roots near zero to full
/// relative precision.
template <class F>
Root bisect(F&& f, double lo, double hi, double tol, int max_iter = 400, bool geometric = false) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream msg;
    msg << "bisection: no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", " << fhi
        << ")";
    throw SolverError(msg.str());
  }
  int it = 0;
  for (; it < max_iter && std::abs(hi - lo) > tol; ++it) {
    double mid = (geometric && lo > 0.0 && hi > 0.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
    double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, it + 1};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if (std::abs(flo) <= std::abs(fhi)) return {lo, std::abs(flo), it};
  return {hi, std::abs(fhi), it};
}

/// Golden-section search for the minimum of a unimodal `f` on [lo, hi].
template <class F>
Extremum golden_min(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 500 && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  Extremum best = fc <= fd ? Extremum{c, fc} : Extremum{d, fd};
  // The endpoints themselves are candidates (boundary minima).
  double fa = f(lo), fb = f(hi);
  if (fa < best.value) best = {lo, fa};
  if (fb < best.value) best = {hi, fb};
  return best;
}

template <class F>
Extremum golden_max(F&& f, double lo, double hi, double tol) {
  auto r = golden_min([&](double x) { return -f(x); }, lo, hi, tol);
  return {r.x, -r.value};
}

/// Minimize over a sorted grid, then polish between the neighbours of the
/// best grid point with golden-section search.
template <class F>
Extremum grid_then_golden_min(F&& f, const std::vector<double>& grid, double tol) {
  if (grid.empty()) throw SolverError("grid_then_golden_min: empty grid");
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = f(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (!std::isfinite(best_val)) throw SolverError("grid_then_golden_min: no finite value on grid");
  double lo = grid[best > 0 ? best - 1 : 0];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  Extremum polished = golden_min(f, lo, hi, tol);
  if (polished.value <= best_val) return polished;
  return {grid[best], best_val};
}

template <class F>
Extremum grid_then_golden_max(F&& f, const std::vector<double>& grid, double tol) {
  auto r = grid_then_golden_min([&](double x) { return -f(x); }, grid, tol);
  return {r.x, -r.value};
}

inline std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

inline std::vector<double> logspace(double a, double b, std::size_t count) {
  auto exps = linspace(std::log(a), std::log(b), count);
  for (auto& e : exps) e = std::exp(e);
  return exps;
}

inline void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// Grid on [0, 1] refined geometrically toward both endpoints.
///
/// Points are log-spaced in t on [min_gap, 0.1], uniform on [0, 1] and
/// log-spaced in 1 - t on [min_gap, 0.1]. Endpoints are excluded.
inline std::vector<double> unit_interval_grid(std::size_t total, double min_gap_low,
                                              double min_gap_high) {
  std::size_t third = total / 3;
  std::vector<double> g;
  g.reserve(total + 4);
  for (double t : logspace(min_gap_low, 0.1, third)) g.push_back(t);
  for (double t : linspace(0.0, 1.0, total - 2 * third + 2))
    if (t > 0.0 && t < 1.0) g.push_back(t);
  for (double s : logspace(min_gap_high, 0.1, third)) g.push_back(1.0 - s);
  sort_unique(g);
  return g;
}

}  // namespace spiked::numeric
