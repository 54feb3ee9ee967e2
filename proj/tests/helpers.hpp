#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nbgate/matrix.hpp"
#include "nbgate/sequence.hpp"

namespace testutil {

inline double max_abs_diff(const nbgate::Mat4& a, const nbgate::Mat4& b) {
  return (a - b).max_abs();
}

// Independent matrix exponential by scaling and squaring with a plain Taylor
// series; slow on purpose, used only to cross-check closed forms.
inline nbgate::Mat4 expm_series(nbgate::Mat4 a) {
  int squarings = 0;
  while (a.frobenius_norm() > 0.5) {
    a = nbgate::cplx{0.5} * a;
    ++squarings;
  }
  nbgate::Mat4 sum = nbgate::Mat4::identity();
  nbgate::Mat4 term = nbgate::Mat4::identity();
  for (int k = 1; k <= 24; ++k) {
    term = nbgate::cplx{1.0 / static_cast<double>(k)} * (term * a);
    sum = sum + term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

inline nbgate::CompositeSequence random_sequence(std::mt19937_64& eng, int n_segments,
                                                 double target_angle) {
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(n_segments));
  for (int k = 0; k < n_segments; ++k) phases.push_back(uniform(eng, 0.0, nbgate::pi));
  return nbgate::make_sequence(target_angle, std::move(phases));
}

}  // namespace testutil
