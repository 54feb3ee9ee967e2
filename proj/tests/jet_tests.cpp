#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "nbgate/analysis.hpp"
#include "nbgate/gates.hpp"
#include "nbgate/jet.hpp"
#include "nbgate/sequence.hpp"

using nbgate::cplx;
using nbgate::iu;
using nbgate::Mat4;
using nbgate::MatrixJet;
using nbgate::pi;

namespace {

// Entrywise finite-difference derivative of a matrix-valued curve, used as an
// independent check on the recursive expansion coefficients.
template <class F>
Mat4 matrix_fd(F&& f, double x, int order, double h) {
  Mat4 out;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double re =
          nbgate::fd_derivative([&](double t) { return f(t)(r, c).real(); }, x, order, h);
      const double im =
          nbgate::fd_derivative([&](double t) { return f(t)(r, c).imag(); }, x, order, h);
      out(r, c) = cplx{re, im};
    }
  }
  return out;
}

double factorial(int n) {
  double v = 1.0;
  for (int k = 2; k <= n; ++k) v *= k;
  return v;
}

}  // namespace

TEST_CASE("jet product truncates like a polynomial product", "[jet]") {
  Mat4 a;
  Mat4 b;
  a(0, 1) = cplx{2.0};
  a(2, 3) = cplx{0.0, -1.0};
  b(1, 0) = cplx{-3.0};
  b(3, 3) = cplx{0.5, 0.5};

  const MatrixJet left{0.0, {Mat4::identity(), a}};
  const MatrixJet right{0.0, {Mat4::identity(), b}};
  const MatrixJet prod = jet_multiply(left, right);

  REQUIRE(prod.order() == 1);
  REQUIRE(testutil::max_abs_diff(prod.coeff(0), Mat4::identity()) == 0.0);
  REQUIRE(testutil::max_abs_diff(prod.coeff(1), a + b) == 0.0);
}

TEST_CASE("jet product rejects mismatched expansions", "[jet]") {
  const MatrixJet at_zero{0.0, {Mat4::identity()}};
  const MatrixJet at_one{1.0, {Mat4::identity()}};
  const MatrixJet longer{0.0, {Mat4::identity(), Mat4::identity()}};
  REQUIRE_THROWS_AS(jet_multiply(at_zero, at_one), std::invalid_argument);
  REQUIRE_THROWS_AS(jet_multiply(at_zero, longer), std::invalid_argument);
  REQUIRE_THROWS_AS(MatrixJet(0.0, {}), std::invalid_argument);
}

TEST_CASE("segment expansion at the collapse point", "[jet]") {
  const double theta = pi / 2.0;
  const double phi = 0.37;
  const MatrixJet jet = nbgate::segment_jet(theta, phi, -1.0, 2);

  // all rotation angles vanish at deviation -1, so the value is the identity
  REQUIRE(testutil::max_abs_diff(jet.coeff(0), Mat4::identity()) == 0.0);
  const Mat4 want1 = iu * theta * nbgate::conjugated_xx_generator(phi);
  REQUIRE(testutil::max_abs_diff(jet.coeff(1), want1) < 1e-15);
}

TEST_CASE("segment expansion value term", "[jet]") {
  const MatrixJet jet = nbgate::segment_jet(pi / 2.0, pi / 4.0, 0.0, 0);
  const Mat4 want = iu * kron(nbgate::pauli_y(), nbgate::pauli_x());
  REQUIRE(jet.order() == 0);
  REQUIRE(testutil::max_abs_diff(jet.coeff(0), want) < 1e-14);
}

TEST_CASE("segment expansion times its reverse is the identity jet", "[jet]") {
  std::mt19937_64 eng{17};
  for (int trial = 0; trial < 8; ++trial) {
    const double theta = testutil::uniform(eng, 0.2, 2.0);
    const double phi = testutil::uniform(eng, 0.0, pi);
    const double center = testutil::uniform(eng, -1.0, 1.0);
    const MatrixJet fwd = nbgate::segment_jet(theta, phi, center, 4);
    const MatrixJet rev = nbgate::segment_jet(-theta, phi, center, 4);
    const MatrixJet prod = jet_multiply(rev, fwd);
    REQUIRE(testutil::max_abs_diff(prod.coeff(0), Mat4::identity()) < 1e-13);
    for (int l = 1; l <= 4; ++l) {
      REQUIRE(prod.coeff(l).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("segment expansion matches finite differences", "[jet]") {
  const double theta = 0.9;
  const double phi = 1.2;
  const double center = 0.15;
  const MatrixJet jet = nbgate::segment_jet(theta, phi, center, 2);
  const auto curve = [&](double eps) {
    return nbgate::shifted_propagator(theta * (1.0 + eps), phi);
  };
  for (int l = 1; l <= 2; ++l) {
    const Mat4 fd = matrix_fd(curve, center, l, 1e-4);
    const Mat4 coeff = cplx{1.0 / factorial(l)} * fd;
    REQUIRE(testutil::max_abs_diff(coeff, jet.coeff(l)) < 1e-6);
  }
}

TEST_CASE("composite expansion value matches the full product", "[jet]") {
  std::mt19937_64 eng{23};
  for (int n : {3, 5, 7}) {
    const nbgate::CompositeSequence seq = testutil::random_sequence(eng, n, pi / 2.0);
    for (double center : {-1.0, -0.3, 0.0, 1.0}) {
      const MatrixJet jet = nbgate::composite_jet(seq, center, 1);
      REQUIRE(testutil::max_abs_diff(jet.coeff(0),
                                     nbgate::composite_propagator(seq, center)) < 1e-13);
    }
  }
}

TEST_CASE("composite expansion matches finite differences", "[jet]") {
  std::mt19937_64 eng{29};
  const nbgate::CompositeSequence seq = testutil::random_sequence(eng, 5, pi / 2.0);
  const double center = -0.4;
  const MatrixJet jet = nbgate::composite_jet(seq, center, 3);
  const auto curve = [&](double eps) { return nbgate::composite_propagator(seq, eps); };
  for (int l = 1; l <= 3; ++l) {
    const Mat4 fd = matrix_fd(curve, center, l, 1e-3);
    const Mat4 coeff = cplx{1.0 / factorial(l)} * fd;
    REQUIRE(testutil::max_abs_diff(coeff, jet.coeff(l)) < 1e-6);
  }
}
