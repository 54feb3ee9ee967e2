#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nbgate/gates.hpp"
#include "nbgate/matrix.hpp"

namespace nbgate {

// Truncated Taylor expansion of a matrix-valued function of the deviation
// about a chosen center: F(eps) = sum_l C_l (eps - center)^l + O(^{order+1}).
// Coefficients follow the Taylor convention C_l = derivative / l!.
class MatrixJet {
 public:
  MatrixJet(double center, std::vector<Mat4> coeffs)
      : center_(center), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("jet needs at least the constant term");
    for (const Mat4& c : coeffs_)
      if (!c.all_finite()) throw std::invalid_argument("jet coefficient is not finite");
  }

  double center() const { return center_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Mat4& coeff(int l) const { return coeffs_.at(static_cast<std::size_t>(l)); }

 private:
  double center_;
  std::vector<Mat4> coeffs_;
};

// Cauchy product of two jets about the same center, truncated at the common
// order. The left argument is the factor applied after the right one, exactly
// as in a matrix product a*b.
inline MatrixJet jet_multiply(const MatrixJet& a, const MatrixJet& b) {
  if (a.center() != b.center()) throw std::invalid_argument("jet centers differ");
  if (a.order() != b.order()) throw std::invalid_argument("jet orders differ");
  const int order = a.order();
  std::vector<Mat4> coeffs(static_cast<std::size_t>(order) + 1);
  for (int l = 0; l <= order; ++l) {
    Mat4 sum;
    for (int m = 0; m <= l; ++m) sum = sum + a.coeff(m) * b.coeff(l - m);
    coeffs[static_cast<std::size_t>(l)] = sum;
  }
  return MatrixJet(a.center(), std::move(coeffs));
}

// Jet of one segment U_phi(theta_nominal * (1 + eps)) about eps = center.
// Because the conjugated generator X_phi is involutory,
//   d^l/d eps^l U_phi = (i theta_nominal)^l X_phi^l U_phi,
// so the coefficients alternate between two matrix prefactors and only the
// scalar (i theta_nominal)^l / l! changes with l.
inline MatrixJet segment_jet(double theta_nominal, double phi, double center, int order) {
  if (order < 0) throw std::invalid_argument("jet order must be non-negative");
  const Mat4 at_center = shifted_propagator(theta_nominal * (1.0 + center), phi);
  const Mat4 x_at_center = conjugated_xx_generator(phi) * at_center;

  std::vector<Mat4> coeffs(static_cast<std::size_t>(order) + 1);
  cplx scale = 1.0;
  for (int l = 0; l <= order; ++l) {
    if (l > 0) scale *= iu * cplx{theta_nominal} / cplx{static_cast<double>(l)};
    coeffs[static_cast<std::size_t>(l)] = scale * (l % 2 == 0 ? at_center : x_at_center);
  }
  return MatrixJet(center, std::move(coeffs));
}

}  // namespace nbgate
