#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbgate/format.hpp"
#include "nbgate/gates.hpp"
#include "nbgate/jet.hpp"
#include "nbgate/matrix.hpp"
#include "nbgate/sequence.hpp"

namespace nbgate {

// Overlap with the nominal target rotation, |tr(U(Theta)† U_composite)| / 4.
// The reference stays at the nominal angle while the composite sees the
// deviation, so a bare single segment traces out |cos(Theta eps)|.
inline double fidelity_to_target(const CompositeSequence& seq, double eps) {
  const Mat4 target = xx_propagator(seq.target_angle);
  return std::abs((target.adjoint() * composite_propagator(seq, eps)).trace()) / 4.0;
}

// |tr U_composite| / 4; equals 1 exactly when the composite is the identity
// up to a global phase.
inline double fidelity_to_identity(const CompositeSequence& seq, double eps) {
  return std::abs(composite_propagator(seq, eps).trace()) / 4.0;
}

struct FidelityProfile {
  CompositeSequence sequence;
  std::vector<double> eps_grid;
  std::vector<double> f_target;
  std::vector<double> f_identity;
};

inline FidelityProfile profile(const CompositeSequence& seq, double eps_min, double eps_max,
                               int samples) {
  seq.validate();
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (!(eps_min < eps_max)) throw std::invalid_argument("deviation range is empty");

  FidelityProfile p;
  p.sequence = seq;
  p.eps_grid.reserve(static_cast<std::size_t>(samples));
  p.f_target.reserve(static_cast<std::size_t>(samples));
  p.f_identity.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double eps = eps_min + (eps_max - eps_min) * static_cast<double>(i) /
                               static_cast<double>(samples - 1);
    if (i == samples - 1) eps = eps_max;
    p.eps_grid.push_back(eps);
    p.f_target.push_back(fidelity_to_target(seq, eps));
    p.f_identity.push_back(fidelity_to_identity(seq, eps));
  }
  return p;
}

// Width of the central peak between the two crossings of the half level
// (peak + wing floor) / 2 nearest to eps = 0. The wings approach |cos Theta|
// rather than zero (the composite tends to the identity there), so the floor
// enters the level; crossings are located by linear interpolation. Absent
// when the level is never crossed on a side.
inline std::optional<double> fwhm(const FidelityProfile& p) {
  const std::vector<double>& eps = p.eps_grid;
  const std::vector<double>& f = p.f_target;
  if (eps.front() > 0.0 || eps.back() < 0.0)
    throw std::invalid_argument("grid must cover the peak at zero deviation");

  std::size_t i0 = 0;
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (std::fabs(eps[i]) < std::fabs(eps[i0])) i0 = i;

  const double peak = f[i0];
  const double floor_level = std::fabs(std::cos(p.sequence.target_angle));
  const double level = 0.5 * (peak + floor_level);

  std::optional<double> right;
  for (std::size_t i = i0; i + 1 < eps.size(); ++i) {
    if (f[i] >= level && f[i + 1] < level) {
      const double t = (level - f[i]) / (f[i + 1] - f[i]);
      right = eps[i] + t * (eps[i + 1] - eps[i]);
      break;
    }
  }
  std::optional<double> left;
  for (std::size_t i = i0; i > 0; --i) {
    if (f[i] >= level && f[i - 1] < level) {
      const double t = (level - f[i]) / (f[i - 1] - f[i]);
      left = eps[i] + t * (eps[i - 1] - eps[i]);
      break;
    }
  }
  if (!left || !right) return std::nullopt;
  return *right - *left;
}

// Worst leakage out of the idle state over the sampled grid points inside
// [band_lo, band_hi], reported as the minimum identity fidelity there.
inline double crosstalk_metric(const FidelityProfile& p, double band_lo, double band_hi) {
  if (!(band_lo <= band_hi)) throw std::invalid_argument("deviation band is empty");
  if (band_lo < p.eps_grid.front() - 1e-12 || band_hi > p.eps_grid.back() + 1e-12)
    throw std::invalid_argument("band extends beyond the sampled grid");
  double worst = 2.0;
  bool any = false;
  for (std::size_t i = 0; i < p.eps_grid.size(); ++i) {
    if (p.eps_grid[i] >= band_lo - 1e-12 && p.eps_grid[i] <= band_hi + 1e-12) {
      worst = std::min(worst, p.f_identity[i]);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("no grid points inside the band");
  return worst;
}

struct ProfileMetrics {
  std::optional<double> fwhm;
  double peak_eps = 0.0;
  std::pair<double, double> crosstalk_band{-1.0, -0.5};
  std::optional<double> crosstalk_min_identity_fidelity;
};

inline ProfileMetrics profile_metrics(const FidelityProfile& p, double band_lo = -1.0,
                                      double band_hi = -0.5) {
  ProfileMetrics m;
  m.crosstalk_band = {band_lo, band_hi};
  std::size_t ip = 0;
  for (std::size_t i = 1; i < p.eps_grid.size(); ++i)
    if (p.f_target[i] > p.f_target[ip]) ip = i;
  m.peak_eps = p.eps_grid[ip];
  if (p.eps_grid.front() <= 0.0 && p.eps_grid.back() >= 0.0) m.fwhm = fwhm(p);
  if (band_lo <= band_hi && band_lo >= p.eps_grid.front() - 1e-12 &&
      band_hi <= p.eps_grid.back() + 1e-12)
    m.crosstalk_min_identity_fidelity = crosstalk_metric(p, band_lo, band_hi);
  return m;
}

// Derivatives d^l/d eps^l of the identity fidelity at a point, taken from the
// truncated propagator series rather than finite differences: with
// g(d) = tr U(center + d) / 4, the fidelity is sqrt(g conj(g)) and its series
// follows from the square-root recurrence. Requires a nonvanishing fidelity
// at the expansion point (the magnitude is not smooth through zero).
inline std::vector<double> identity_fidelity_derivatives(const CompositeSequence& seq,
                                                         double center, int count) {
  if (count < 1) throw std::invalid_argument("need at least one derivative");
  const MatrixJet jet = composite_jet(seq, center, count);

  std::vector<cplx> g(static_cast<std::size_t>(count) + 1);
  for (int l = 0; l <= count; ++l)
    g[static_cast<std::size_t>(l)] = jet.coeff(l).trace() / 4.0;

  std::vector<double> h(static_cast<std::size_t>(count) + 1, 0.0);
  for (int m = 0; m <= count; ++m) {
    double s = 0.0;
    for (int j = 0; j <= m; ++j)
      s += (g[static_cast<std::size_t>(j)] * std::conj(g[static_cast<std::size_t>(m - j)])).real();
    h[static_cast<std::size_t>(m)] = s;
  }
  if (h[0] < 1e-12)
    throw std::domain_error("identity fidelity vanishes at the expansion point");

  std::vector<double> f(static_cast<std::size_t>(count) + 1, 0.0);
  f[0] = std::sqrt(h[0]);
  for (int m = 1; m <= count; ++m) {
    double s = 0.0;
    for (int a = 1; a < m; ++a)
      s += f[static_cast<std::size_t>(a)] * f[static_cast<std::size_t>(m - a)];
    f[static_cast<std::size_t>(m)] = (h[static_cast<std::size_t>(m)] - s) / (2.0 * f[0]);
  }

  std::vector<double> out(static_cast<std::size_t>(count));
  double factorial = 1.0;
  for (int l = 1; l <= count; ++l) {
    factorial *= static_cast<double>(l);
    out[static_cast<std::size_t>(l - 1)] = factorial * f[static_cast<std::size_t>(l)];
  }
  return out;
}

// Central finite difference for the l-th derivative with one Richardson step
// (h and h/2). Practical only for low orders; rounding noise grows fast and
// swamps orders above three at any sensible step.
template <class F>
double fd_derivative(F&& f, double x, int l, double h = 1e-3) {
  auto stencil = [&f, x, l](double step) {
    switch (l) {
      case 1:
        return (f(x + step) - f(x - step)) / (2.0 * step);
      case 2:
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
      case 3:
        return (f(x + 2.0 * step) - 2.0 * f(x + step) + 2.0 * f(x - step) - f(x - 2.0 * step)) /
               (2.0 * step * step * step);
      case 4:
        return (f(x + 2.0 * step) - 4.0 * f(x + step) + 6.0 * f(x) - 4.0 * f(x - step) +
                f(x - 2.0 * step)) /
               (step * step * step * step);
      default:
        throw std::invalid_argument("derivative order must be 1..4");
    }
  };
  const double coarse = stencil(h);
  const double fine = stencil(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

inline std::string to_csv(const FidelityProfile& p) {
  std::string out = "epsilon,f_target,f_identity\n";
  for (std::size_t i = 0; i < p.eps_grid.size(); ++i) {
    out += format_real(p.eps_grid[i]);
    out += ',';
    out += format_real(p.f_target[i]);
    out += ',';
    out += format_real(p.f_identity[i]);
    out += '\n';
  }
  return out;
}

struct ProfileTable {
  std::vector<double> eps_grid;
  std::vector<double> f_target;
  std::vector<double> f_identity;
};

inline ProfileTable parse_profile_csv(std::string_view text) {
  ProfileTable t;
  bool header_seen = false;
  for (std::string_view line : split(text, '\n')) {
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "epsilon,f_target,f_identity")
        throw std::invalid_argument("unexpected csv header: '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const std::vector<std::string_view> cells = split(line, ',');
    if (cells.size() != 3)
      throw std::invalid_argument("expected 3 csv columns, got line '" + std::string(line) + "'");
    t.eps_grid.push_back(parse_real(cells[0]));
    t.f_target.push_back(parse_real(cells[1]));
    t.f_identity.push_back(parse_real(cells[2]));
  }
  if (!header_seen) throw std::invalid_argument("csv header missing");
  return t;
}

}  // namespace nbgate
