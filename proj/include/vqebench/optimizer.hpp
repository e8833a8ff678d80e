#pragma once

// BFGS quasi-Newton minimization with a strong-Wolfe line search.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vqebench/errors.hpp"

namespace vqebench {

struct OptimizerConfig {
  double gradient_tolerance = 1e-5;
  std::size_t max_evaluations = 10000;
  double c1 = 1e-4;
  double c2 = 0.9;
  std::size_t max_line_search_evaluations = 40;

  void validate() const {
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) throw InputError("Wolfe constants must satisfy 0 < c1 < c2 < 1");
    if (gradient_tolerance <= 0.0) throw InputError("gradient tolerance must be positive");
    if (max_evaluations == 0) throw InputError("evaluation budget must be positive");
  }
};

/// Objective writing the gradient into `grad` and returning the value.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OptimizeResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> gradient;
  std::size_t n_evaluations = 0;
  std::size_t n_iterations = 0;
  bool converged = false;
  std::string message;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Minimizer of the cubic matching f and f' at a and b; nullopt-like NaN when
/// the interpolant has no interior minimum.
inline double cubic_minimizer(double a, double fa, double dfa, double b, double fb, double dfb) {
  const double d1 = dfa + dfb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - dfa * dfb;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double denom = dfb - dfa + 2.0 * d2;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return b - (b - a) * (dfb + d2 - d1) / denom;
}

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double df = 0.0;
};

/// Evaluates phi(alpha) = f(x + alpha p) and its slope, with the objective
/// call counted against the budget.
class LineFunction {
 public:
  LineFunction(const Objective& f, std::span<const double> x, std::span<const double> p, std::size_t& evaluations,
               std::size_t budget)
      : f_(f), x_(x), p_(p), evaluations_(evaluations), budget_(budget), trial_(x.size()), grad_(x.size()) {}

  [[nodiscard]] bool exhausted() const { return evaluations_ >= budget_; }

  LinePoint operator()(double alpha) {
    for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + alpha * p_[i];
    const double v = f_(trial_, grad_);
    ++evaluations_;
    if (!std::isfinite(v)) throw NumericalError("objective returned a non-finite value");
    return {alpha, v, dot(grad_, p_)};
  }

  [[nodiscard]] const std::vector<double>& last_x() const { return trial_; }
  [[nodiscard]] const std::vector<double>& last_gradient() const { return grad_; }

 private:
  const Objective& f_;
  std::span<const double> x_;
  std::span<const double> p_;
  std::size_t& evaluations_;
  std::size_t budget_;
  std::vector<double> trial_;
  std::vector<double> grad_;
};

struct LineSearchResult {
  bool ok = false;
  LinePoint point;
  std::vector<double> x;
  std::vector<double> gradient;
};

inline LineSearchResult wolfe_line_search(LineFunction& phi, LinePoint zero, const OptimizerConfig& cfg) {
  LineSearchResult out;
  std::size_t used = 0;
  auto eval = [&](double a) {
    ++used;
    return phi(a);
  };
  auto accept = [&](const LinePoint& pt) {
    out.ok = true;
    out.point = pt;
    out.x = phi.last_x();
    out.gradient = phi.last_gradient();
    return out;
  };
  auto sufficient = [&](const LinePoint& pt) { return pt.f <= zero.f + cfg.c1 * pt.alpha * zero.df; };
  auto curvature = [&](const LinePoint& pt) { return std::abs(pt.df) <= -cfg.c2 * zero.df; };

  auto zoom = [&](LinePoint lo, LinePoint hi) -> LineSearchResult {
    while (used < cfg.max_line_search_evaluations && !phi.exhausted()) {
      double a = cubic_minimizer(lo.alpha, lo.f, lo.df, hi.alpha, hi.f, hi.df);
      const double lo_b = std::min(lo.alpha, hi.alpha), hi_b = std::max(lo.alpha, hi.alpha);
      const double margin = 0.1 * (hi_b - lo_b);
      if (!std::isfinite(a) || a < lo_b + margin || a > hi_b - margin) a = 0.5 * (lo.alpha + hi.alpha);
      if (hi_b - lo_b < 1e-16 * std::max(1.0, hi_b)) break;
      const LinePoint pt = eval(a);
      if (!sufficient(pt) || pt.f >= lo.f) {
        hi = pt;
      } else {
        if (curvature(pt)) return accept(pt);
        if (pt.df * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = pt;
      }
    }
    return out;
  };

  LinePoint prev = zero;
  double alpha = 1.0;
  for (int k = 0; used < cfg.max_line_search_evaluations && !phi.exhausted(); ++k) {
    const LinePoint pt = eval(alpha);
    if (!sufficient(pt) || (k > 0 && pt.f >= prev.f)) return zoom(prev, pt);
    if (curvature(pt)) return accept(pt);
    if (pt.df >= 0.0) return zoom(pt, prev);
    prev = pt;
    alpha *= 2.0;
  }
  return out;
}

}  // namespace detail

/// Minimizes `f` from `x0`. Stops when the gradient infinity norm drops below
/// the tolerance or the evaluation budget is spent.
inline OptimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const std::size_t n = x0.size();
  OptimizeResult r;
  r.x = std::move(x0);
  r.gradient.assign(n, 0.0);
  r.f = f(r.x, r.gradient);
  r.n_evaluations = 1;
  if (!std::isfinite(r.f)) throw NumericalError("objective returned a non-finite value");

  std::vector<double> h(n * n, 0.0);
  auto reset = [&] {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  };
  reset();
  bool identity = true;
  std::vector<double> p(n), s(n), y(n), hy(n);

  while (true) {
    if (detail::inf_norm(r.gradient) < cfg.gradient_tolerance) {
      r.converged = true;
      r.message = "gradient tolerance reached";
      return r;
    }
    if (r.n_evaluations >= cfg.max_evaluations) {
      r.message = "evaluation budget exhausted";
      return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v -= h[i * n + j] * r.gradient[j];
      p[i] = v;
    }
    double slope = detail::dot(p, r.gradient);
    if (!(slope < 0.0)) {
      reset();
      identity = true;
      for (std::size_t i = 0; i < n; ++i) p[i] = -r.gradient[i];
      slope = detail::dot(p, r.gradient);
    }
    detail::LineFunction phi(f, r.x, p, r.n_evaluations, cfg.max_evaluations);
    const auto ls = detail::wolfe_line_search(phi, {0.0, r.f, slope}, cfg);
    if (!ls.ok) {
      if (phi.exhausted()) {
        r.message = "evaluation budget exhausted";
        return r;
      }
      if (!identity) {
        reset();
        identity = true;
        continue;
      }
      r.message = "line search failed";
      return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ls.x[i] - r.x[i];
      y[i] = ls.gradient[i] - r.gradient[i];
    }
    r.x = ls.x;
    r.gradient = ls.gradient;
    r.f = ls.point.f;
    ++r.n_iterations;

    const double sy = detail::dot(s, y);
    if (sy <= 1e-14 * std::sqrt(detail::dot(s, s) * detail::dot(y, y))) continue;
    if (identity) {
      const double scale = sy / detail::dot(y, y);
      for (std::size_t i = 0; i < n; ++i) h[i * n + i] = scale;
      identity = false;
    }
    // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
    const double rho = 1.0 / sy;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += h[i * n + j] * y[j];
      hy[i] = v;
    }
    const double yhy = detail::dot(y, hy);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
  }
}

}  // namespace vqebench
