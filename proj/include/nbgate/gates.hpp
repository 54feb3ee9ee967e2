#pragma once

#include <cmath>

#include "nbgate/matrix.hpp"

namespace nbgate {

// Entangling generator sigma_x (x) sigma_x; squares to the identity, so its
// exponential has the closed form used by xx_propagator.
inline const Mat4& xx_generator() {
  static const Mat4 m = kron(pauli_x(), pauli_x());
  return m;
}

// exp(i theta sigma_x sigma_x) = cos(theta) 1 + i sin(theta) sigma_x sigma_x
inline Mat4 xx_propagator(double theta) {
  return cplx{std::cos(theta)} * identity4() + iu * cplx{std::sin(theta)} * xx_generator();
}

// exp(i phi sigma_z) on qubit 1: diag(e^{i phi}, e^{i phi}, e^{-i phi}, e^{-i phi})
inline Mat4 phase_gate_q1(double phi) {
  Mat4 m;
  const cplx p = std::polar(1.0, phi);
  m(0, 0) = p;
  m(1, 1) = p;
  m(2, 2) = std::conj(p);
  m(3, 3) = std::conj(p);
  return m;
}

// Conjugated generator X_phi = F(-phi) (sigma_x sigma_x) F(phi)
//                            = (cos 2phi sigma_x + sin 2phi sigma_y) (x) sigma_x.
// Involutory (X_phi^2 = 1) and pi-periodic in phi.
inline Mat4 conjugated_xx_generator(double phi) {
  const Mat2 axis = cplx{std::cos(2.0 * phi)} * pauli_x() + cplx{std::sin(2.0 * phi)} * pauli_y();
  return kron(axis, pauli_x());
}

// Phase-shifted segment propagator F(-phi) U(theta) F(phi); closed form from
// the conjugated generator, so no matrix products are needed.
inline Mat4 shifted_propagator(double theta, double phi) {
  return cplx{std::cos(theta)} * identity4() + iu * cplx{std::sin(theta)} * conjugated_xx_generator(phi);
}

// Local equivalence between the XX rotation and a controlled-phase gate:
// conjugating both qubits with Hadamards turns the XX generator into ZZ, and
// single-qubit Z rotations plus a global phase shape the result into
// diag(1, 1, 1, e^{i phi}) with phi = 4 theta.
inline Mat4 cphase_from_xx(double theta) {
  const double phi = 4.0 * theta;
  const Mat4 hh = kron(hadamard(), hadamard());
  const Mat4 zz_rotation = hh * xx_propagator(theta) * hh;

  Mat4 local;  // e^{-i(phi/4) sigma_z,1} e^{-i(phi/4) sigma_z,2}, diagonal
  const cplx a = std::polar(1.0, -phi / 4.0);
  local(0, 0) = a * a;
  local(1, 1) = 1.0;
  local(2, 2) = 1.0;
  local(3, 3) = std::conj(a) * std::conj(a);

  return std::polar(1.0, phi / 4.0) * (local * zz_rotation);
}

}  // namespace nbgate
