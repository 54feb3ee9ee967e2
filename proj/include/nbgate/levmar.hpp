#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nbgate {

struct LeastSquaresOptions {
  double lambda_init = 1e-3;   // damping start; x10 on rejected step, /10 on accepted
  double fd_step = 1e-7;       // central-difference Jacobian step
  int max_iterations = 200;
  double rms_tol = 1e-10;      // success when the residual RMS drops below this
};

struct LeastSquaresResult {
  std::vector<double> x;
  double rms = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline double residual_rms(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::sqrt(s / static_cast<double>(r.size()));
}

namespace detail {

// Gaussian elimination with partial pivoting; dimensions here never exceed
// the number of free phases, so nothing fancier is warranted.
inline bool solve_linear(std::vector<double> a, std::vector<double> b, std::size_t n,
                         std::vector<double>& out) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const double d = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri * n + c] * out[c];
    out[ri] = s / a[ri * n + ri];
  }
  for (double v : out)
    if (!std::isfinite(v)) return false;
  return true;
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

// Damped least squares over a residual function f: R^n -> R^m. Identity
// damping, central-difference Jacobian. Deterministic: fixed evaluation
// order, no randomness, no concurrency.
template <class Residuals>
LeastSquaresResult levenberg_marquardt(Residuals&& f, std::vector<double> x,
                                       const LeastSquaresOptions& opt = {}) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("no free parameters");

  std::vector<double> r = f(x);
  const std::size_t m = r.size();
  if (m == 0) throw std::invalid_argument("empty residual vector");

  LeastSquaresResult result;
  if (!detail::all_finite(r)) return result;  // hopeless start: not converged

  auto cost_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return s;
  };

  double cost = cost_of(r);
  double lambda = opt.lambda_init;
  std::vector<double> jt_r(n), jtj(n * n), step, x_try, r_try;
  std::vector<std::vector<double>> jac_cols(n);

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    if (residual_rms(r) < opt.rms_tol) break;

    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> xp = x, xm = x;
      xp[j] += opt.fd_step;
      xm[j] -= opt.fd_step;
      const std::vector<double> rp = f(xp), rm = f(xm);
      std::vector<double>& col = jac_cols[j];
      col.resize(m);
      for (std::size_t i = 0; i < m; ++i) col[i] = (rp[i] - rm[i]) / (2.0 * opt.fd_step);
    }
    for (std::size_t a = 0; a < n; ++a) {
      double g = 0.0;
      for (std::size_t i = 0; i < m; ++i) g += jac_cols[a][i] * r[i];
      jt_r[a] = g;
      for (std::size_t b = a; b < n; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += jac_cols[a][i] * jac_cols[b][i];
        jtj[a * n + b] = s;
        jtj[b * n + a] = s;
      }
    }

    bool stepped = false;
    while (lambda < 1e14) {
      std::vector<double> damped = jtj;
      for (std::size_t d = 0; d < n; ++d) damped[d * n + d] += lambda;
      std::vector<double> rhs(n);
      for (std::size_t d = 0; d < n; ++d) rhs[d] = -jt_r[d];
      if (detail::solve_linear(std::move(damped), std::move(rhs), n, step)) {
        x_try = x;
        for (std::size_t d = 0; d < n; ++d) x_try[d] += step[d];
        r_try = f(x_try);
        if (detail::all_finite(r_try)) {
          const double cost_try = cost_of(r_try);
          if (cost_try < cost) {
            x = x_try;
            r = r_try;
            cost = cost_try;
            lambda = std::max(lambda * 0.1, 1e-14);
            stepped = true;
            break;
          }
        }
      }
      lambda *= 10.0;
    }
    if (!stepped) break;  // damping exhausted; leave with the best point found
  }

  result.x = std::move(x);
  result.rms = residual_rms(r);
  result.iterations = iter;
  result.converged = result.rms < opt.rms_tol;
  return result;
}

}  // namespace nbgate
