#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace nbgate {

using cplx = std::complex<double>;

inline constexpr cplx iu{0.0, 1.0};

// Dense square complex matrix of compile-time dimension. Only the 2x2 and
// 4x4 instantiations are used: single-qubit generators and two-qubit
// propagators. Value semantics throughout; no allocation.
template <std::size_t Dim>
class SquareMat {
 public:
  static constexpr std::size_t dim = Dim;

  SquareMat() : e_{} {}

  SquareMat(std::initializer_list<cplx> entries) : e_{} {
    if (entries.size() != Dim * Dim)
      throw std::invalid_argument("matrix initializer has wrong length");
    std::size_t i = 0;
    for (const cplx& v : entries) e_[i++] = v;
  }

  cplx& operator()(std::size_t r, std::size_t c) { return e_[r * Dim + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return e_[r * Dim + c]; }

  static SquareMat identity() {
    SquareMat m;
    for (std::size_t i = 0; i < Dim; ++i) m(i, i) = 1.0;
    return m;
  }

  SquareMat operator+(const SquareMat& o) const {
    SquareMat r;
    for (std::size_t i = 0; i < Dim * Dim; ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
  }

  SquareMat operator-(const SquareMat& o) const {
    SquareMat r;
    for (std::size_t i = 0; i < Dim * Dim; ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
  }

  SquareMat operator*(const SquareMat& o) const {
    SquareMat r;
    for (std::size_t i = 0; i < Dim; ++i)
      for (std::size_t k = 0; k < Dim; ++k) {
        const cplx a = (*this)(i, k);
        if (a == cplx{}) continue;
        for (std::size_t j = 0; j < Dim; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  friend SquareMat operator*(const cplx& s, const SquareMat& m) {
    SquareMat r;
    for (std::size_t i = 0; i < Dim * Dim; ++i) r.e_[i] = s * m.e_[i];
    return r;
  }

  SquareMat adjoint() const {
    SquareMat r;
    for (std::size_t i = 0; i < Dim; ++i)
      for (std::size_t j = 0; j < Dim; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : e_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (const cplx& v : e_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  std::array<cplx, Dim * Dim> e_;
};

using Mat2 = SquareMat<2>;
using Mat4 = SquareMat<4>;

// result[2i+k][2j+l] = a[i][j] * b[k][l]; the first argument is the left
// tensor factor (qubit 1), so kron(sigma_z, I) acts on qubit 1.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

inline const Mat2& pauli_x() {
  static const Mat2 m{0.0, 1.0, 1.0, 0.0};
  return m;
}

inline const Mat2& pauli_y() {
  static const Mat2 m{0.0, -iu, iu, 0.0};
  return m;
}

inline const Mat2& pauli_z() {
  static const Mat2 m{1.0, 0.0, 0.0, -1.0};
  return m;
}

inline const Mat2& hadamard() {
  static const double s = 1.0 / std::sqrt(2.0);
  static const Mat2 m{s, s, s, -s};
  return m;
}

inline const Mat4& identity4() {
  static const Mat4 m = Mat4::identity();
  return m;
}

inline double unitarity_defect(const Mat4& u) {
  return (u.adjoint() * u - identity4()).frobenius_norm();
}

// Wrapper that asserts U dagger U = 1 on construction; all propagator
// builders return one of these.
class Unitary4 {
 public:
  explicit Unitary4(const Mat4& m, double tol = 1e-12) : m_(m) {
    if (!m.all_finite() || unitarity_defect(m) > tol)
      throw std::invalid_argument("matrix is not unitary within tolerance");
  }

  const Mat4& mat() const { return m_; }

 private:
  Mat4 m_;
};

}  // namespace nbgate
