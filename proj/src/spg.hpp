#pragma once

// Nonmonotone spectral projected gradient (Birgin, Martinez, Raydan) over a
// convex set given by its Euclidean projection, with a caller-supplied
// optimality gap as the stopping certificate. Shared by the simplex
// (classical comparator) and density-matrix (batch ML) solvers.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace qsb::detail {

struct SpgOptions {
  double tol = 1e-8;
  long max_iter = 100000;
  int memory = 10;          // nonmonotone window
  double sufficient = 1e-4; // Armijo constant
  double step_min = 1e-12;
  double step_max = 1e12;
};

template <class Point>
struct SpgResult {
  Point x;
  double value;
  double gap;
  long iterations;
  bool converged;
};

// Problem concept:
//   double value(const Point&)            (+inf outside the domain)
//   Point gradient(const Point&)
//   Point project(const Point&)
//   double inner(const Point&, const Point&)
//   double gap(const Point& x, const Point& grad)
template <class Point, class Problem>
SpgResult<Point> spg_minimize(const Problem& prob, Point x, const SpgOptions& opt) {
  double fx = prob.value(x);
  Point g = prob.gradient(x);
  double gap = prob.gap(x, g);

  SpgResult<Point> best{x, fx, gap, 0, gap <= opt.tol};
  if (best.converged) return best;

  std::deque<double> history{fx};

  double step;
  {
    const Point probe = prob.project(x - g);
    const Point diff = probe - x;
    const double n = std::sqrt(std::max(prob.inner(diff, diff), 0.0));
    step = n > 0 ? std::clamp(1.0 / n, opt.step_min, opt.step_max) : 1.0;
  }

  for (long k = 1; k <= opt.max_iter; ++k) {
    const Point d = prob.project(x - step * g) - x;
    const double slope = prob.inner(g, d);
    const double fmax = *std::max_element(history.begin(), history.end());

    double lambda = 1.0;
    Point xn = x + d;
    double fn = prob.value(xn);
    bool accepted = false;
    if (slope < 0) {
      while (true) {
        if (std::isfinite(fn) && fn <= fmax + opt.sufficient * lambda * slope) {
          accepted = true;
          break;
        }
        // Safeguarded quadratic interpolation on the segment.
        double trial = 0.5 * lambda;
        if (std::isfinite(fn)) {
          const double denom = 2.0 * (fn - fx - lambda * slope);
          if (denom > 0) {
            const double q = -slope * lambda * lambda / denom;
            trial = std::clamp(q, 0.1 * lambda, 0.5 * lambda);
          }
        }
        lambda = trial;
        if (lambda < 1e-16) break;
        xn = x + lambda * d;
        fn = prob.value(xn);
      }
    }

    Point gn;
    if (accepted) {
      gn = prob.gradient(xn);
    } else {
      // Close to the optimum both the decrease in f and the directional
      // derivative drop below rounding; keep going while the certificate
      // itself improves.
      lambda = 1.0;
      xn = x + d;
      fn = prob.value(xn);
      if (!std::isfinite(fn)) break;
      gn = prob.gradient(xn);
      if (!(prob.gap(xn, gn) < gap)) break;
    }
    const Point s = xn - x;
    const Point y = gn - g;
    const double sy = prob.inner(s, y);
    step = sy > 0 ? std::clamp(prob.inner(s, s) / sy, opt.step_min, opt.step_max) : opt.step_max;

    x = std::move(xn);
    g = std::move(gn);
    fx = fn;
    history.push_back(fx);
    if (static_cast<int>(history.size()) > opt.memory) history.pop_front();

    gap = prob.gap(x, g);
    if (gap < best.gap || (gap == best.gap && fx < best.value)) {
      best = {x, fx, gap, k, gap <= opt.tol};
    }
    best.iterations = k;
    if (gap <= opt.tol) break;
  }
  return best;
}

}  // namespace qsb::detail
