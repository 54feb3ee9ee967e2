#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "nbgate/analysis.hpp"
#include "nbgate/design.hpp"
#include "nbgate/sequence.hpp"

using nbgate::CompositeSequence;
using nbgate::FidelityProfile;
using nbgate::make_sequence;
using nbgate::pi;
using nbgate::TableRow;

TEST_CASE("bare rotation fidelities have closed forms", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});
  for (double eps : {-1.2, -0.5, 0.0, 0.3, 1.0}) {
    REQUIRE(nbgate::fidelity_to_target(seq, eps) ==
            Catch::Approx(std::fabs(std::cos(pi / 2.0 * eps))).margin(1e-12));
    REQUIRE(nbgate::fidelity_to_identity(seq, eps) ==
            Catch::Approx(std::fabs(std::cos(pi / 2.0 * (1.0 + eps)))).margin(1e-12));
  }
}

TEST_CASE("fidelities at the distinguished deviations", "[analysis]") {
  std::mt19937_64 eng{61};
  for (int n : {3, 7}) {
    const CompositeSequence seq = testutil::random_sequence(eng, n, pi / 2.0);
    // every composite collapses to the identity when all angles vanish
    REQUIRE(nbgate::fidelity_to_identity(seq, -1.0) == Catch::Approx(1.0).margin(1e-13));
    REQUIRE(nbgate::fidelity_to_target(seq, -1.0) == Catch::Approx(0.0).margin(1e-13));
  }

  for (const TableRow& row : nbgate::reference_table()) {
    const CompositeSequence seq = nbgate::sequence_from_row(row);
    INFO("n=" << row.n_segments << " theta_pi=" << row.theta_pi);
    // Peak fidelity is quadratically sensitive to the stored 4-decimal phase
    // roundings, so only the exact 5-segment rows reach machine level there.
    const double peak_margin = row.n_segments == 5 ? 1e-12 : 1e-6;
    REQUIRE(nbgate::fidelity_to_target(seq, 0.0) ==
            Catch::Approx(1.0).epsilon(0.0).margin(peak_margin));
    REQUIRE(nbgate::fidelity_to_identity(seq, -1.0) ==
            Catch::Approx(1.0).epsilon(0.0).margin(1e-12));
    REQUIRE(nbgate::fidelity_to_identity(seq, 1.0) ==
            Catch::Approx(1.0).epsilon(0.0).margin(1e-12));
  }
}

TEST_CASE("profile sampling grid", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});
  const FidelityProfile p = nbgate::profile(seq, -1.5, 1.5, 7);
  REQUIRE(p.eps_grid.size() == 7);
  REQUIRE(p.eps_grid.front() == -1.5);
  REQUIRE(p.eps_grid.back() == 1.5);
  REQUIRE(p.eps_grid[3] == 0.0);
  for (std::size_t i = 1; i < p.eps_grid.size(); ++i)
    REQUIRE(p.eps_grid[i] > p.eps_grid[i - 1]);
  for (std::size_t i = 0; i < p.eps_grid.size(); ++i) {
    REQUIRE(p.f_target[i] >= -1e-12);
    REQUIRE(p.f_target[i] <= 1.0 + 1e-12);
    REQUIRE(p.f_identity[i] >= -1e-12);
    REQUIRE(p.f_identity[i] <= 1.0 + 1e-12);
  }

  REQUIRE_THROWS_AS(nbgate::profile(seq, -1.0, 1.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(nbgate::profile(seq, 1.0, -1.0, 10), std::invalid_argument);
}

TEST_CASE("peak width of the bare rotation", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});
  const FidelityProfile p = nbgate::profile(seq, -1.5, 1.5, 3001);
  const std::optional<double> w = nbgate::fwhm(p);
  REQUIRE(w.has_value());
  // |cos(pi eps / 2)| crosses 1/2 at eps = 2/3 on either side
  REQUIRE(*w == Catch::Approx(4.0 / 3.0).margin(1e-5));
}

TEST_CASE("peak width narrows for longer composites", "[analysis]") {
  const FidelityProfile single =
      nbgate::profile(make_sequence(pi / 2.0, {0.0}), -1.5, 1.5, 1501);
  const FidelityProfile five = nbgate::profile(
      nbgate::sequence_from_row(*nbgate::find_table_row(5, 0.5)), -1.5, 1.5, 1501);
  const std::optional<double> w1 = nbgate::fwhm(single);
  const std::optional<double> w5 = nbgate::fwhm(five);
  REQUIRE(w1.has_value());
  REQUIRE(w5.has_value());
  REQUIRE(*w5 < *w1);
}

TEST_CASE("peak width is absent when the level is never crossed", "[analysis]") {
  FidelityProfile flat;
  flat.sequence = make_sequence(pi / 2.0, {0.0});
  flat.eps_grid = {-1.0, 0.0, 1.0};
  flat.f_target = {1.0, 1.0, 1.0};
  flat.f_identity = {1.0, 1.0, 1.0};
  REQUIRE(!nbgate::fwhm(flat).has_value());

  const FidelityProfile off_center =
      nbgate::profile(make_sequence(pi / 2.0, {0.0}), 0.5, 1.0, 11);
  REQUIRE_THROWS_AS(nbgate::fwhm(off_center), std::invalid_argument);
}

TEST_CASE("crosstalk metric scans the identity fidelity over a band", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});
  const FidelityProfile p = nbgate::profile(seq, -1.5, 1.5, 3001);

  REQUIRE(nbgate::crosstalk_metric(p, -1.0, -1.0) == Catch::Approx(1.0).margin(1e-12));
  // |cos(pi(1+eps)/2)| over [-1, -0.5] bottoms out at the band edge
  REQUIRE(nbgate::crosstalk_metric(p, -1.0, -0.5) ==
          Catch::Approx(std::sqrt(0.5)).margin(1e-12));

  REQUIRE_THROWS_AS(nbgate::crosstalk_metric(p, -2.0, -0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(nbgate::crosstalk_metric(p, -0.5, -1.0), std::invalid_argument);

  const FidelityProfile coarse = nbgate::profile(seq, -1.0, 1.0, 3);
  REQUIRE_THROWS_AS(nbgate::crosstalk_metric(coarse, -0.7, -0.3), std::invalid_argument);
}

TEST_CASE("long composite keeps the idle state unexcited across the band", "[analysis]") {
  const CompositeSequence seq = nbgate::sequence_from_row(*nbgate::find_table_row(11, 0.5));
  const FidelityProfile p = nbgate::profile(seq, -1.5, 1.5, 3001);
  const double worst = nbgate::crosstalk_metric(p, -1.0, -0.5);
  REQUIRE(worst > 0.96);
  REQUIRE(nbgate::fidelity_to_identity(seq, -0.7) > 0.96);
}

TEST_CASE("profile metrics bundle", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});
  const FidelityProfile p = nbgate::profile(seq, -1.5, 1.5, 601);
  const nbgate::ProfileMetrics m = nbgate::profile_metrics(p);
  REQUIRE(m.peak_eps == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(m.fwhm.has_value());
  REQUIRE(m.crosstalk_min_identity_fidelity.has_value());
  REQUIRE(m.crosstalk_band.first == -1.0);
  REQUIRE(m.crosstalk_band.second == -0.5);

  const FidelityProfile narrow = nbgate::profile(seq, -0.2, 0.2, 41);
  const nbgate::ProfileMetrics nm = nbgate::profile_metrics(narrow);
  REQUIRE(!nm.crosstalk_min_identity_fidelity.has_value());
}

TEST_CASE("identity fidelity derivatives from the expansion", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});

  // |cos(pi(1+eps)/2)| at eps = -1: slope zero, curvature -pi^2/4
  const std::vector<double> d = nbgate::identity_fidelity_derivatives(seq, -1.0, 2);
  REQUIRE(d.size() == 2);
  REQUIRE(d[0] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(d[1] == Catch::Approx(-pi * pi / 4.0).margin(1e-12));

  REQUIRE_THROWS_AS(nbgate::identity_fidelity_derivatives(seq, -1.0, 0),
                    std::invalid_argument);
  // the magnitude is not differentiable through a zero of the fidelity
  REQUIRE_THROWS_AS(nbgate::identity_fidelity_derivatives(seq, 0.0, 2), std::domain_error);
}

TEST_CASE("expansion derivatives agree with finite differences", "[analysis]") {
  const CompositeSequence seq = nbgate::sequence_from_row(*nbgate::find_table_row(5, 0.5));
  const double center = -0.3;
  const std::vector<double> d = nbgate::identity_fidelity_derivatives(seq, center, 3);
  for (int l = 1; l <= 3; ++l) {
    const double fd = nbgate::fd_derivative(
        [&seq](double e) { return nbgate::fidelity_to_identity(seq, e); }, center, l);
    REQUIRE(d[static_cast<std::size_t>(l - 1)] == Catch::Approx(fd).margin(1e-6));
  }
  REQUIRE_THROWS_AS(nbgate::fd_derivative([](double x) { return x; }, 0.0, 5),
                    std::invalid_argument);
}

TEST_CASE("designed rows are flat at both collapse points", "[analysis]") {
  for (const TableRow& row : nbgate::reference_table()) {
    const CompositeSequence seq = nbgate::sequence_from_row(row);
    for (double center : {-1.0, 1.0}) {
      const std::vector<double> d =
          nbgate::identity_fidelity_derivatives(seq, center, row.order);
      for (int l = 1; l <= row.order; ++l) {
        INFO("n=" << row.n_segments << " theta_pi=" << row.theta_pi << " center=" << center
                  << " l=" << l);
        REQUIRE(std::fabs(d[static_cast<std::size_t>(l - 1)]) < 1e-5);
      }
    }
  }
}

TEST_CASE("shortest designed composite matches the bare rotation pointwise", "[analysis]") {
  const CompositeSequence three =
      make_sequence(pi / 2.0, {0.25 * pi, 0.0, 0.25 * pi});
  const CompositeSequence one = make_sequence(pi / 2.0, {0.0});
  const FidelityProfile p3 = nbgate::profile(three, -1.5, 1.5, 301);
  const FidelityProfile p1 = nbgate::profile(one, -1.5, 1.5, 301);
  for (std::size_t i = 0; i < p3.eps_grid.size(); ++i) {
    REQUIRE(p3.f_target[i] == Catch::Approx(p1.f_target[i]).margin(1e-12));
  }
}

TEST_CASE("profile csv format", "[analysis]") {
  const CompositeSequence seq = make_sequence(pi / 2.0, {0.0});
  const FidelityProfile p = nbgate::profile(seq, -1.0, 1.0, 3);
  REQUIRE(nbgate::to_csv(p) ==
          "epsilon,f_target,f_identity\n"
          "-1,6.12323399574e-17,1\n"
          "0,1,6.12323399574e-17\n"
          "1,6.12323399574e-17,1\n");

  const FidelityProfile wide = nbgate::profile(seq, -1.5, 1.5, 7);
  REQUIRE(nbgate::to_csv(wide).find("0.707106781187") != std::string::npos);
}

TEST_CASE("profile csv round trip and validation", "[analysis]") {
  const CompositeSequence seq = nbgate::sequence_from_row(*nbgate::find_table_row(7, 0.25));
  const FidelityProfile p = nbgate::profile(seq, -1.5, 1.5, 101);
  const nbgate::ProfileTable t = nbgate::parse_profile_csv(nbgate::to_csv(p));
  REQUIRE(t.eps_grid.size() == p.eps_grid.size());
  for (std::size_t i = 0; i < t.eps_grid.size(); ++i) {
    REQUIRE(t.eps_grid[i] == Catch::Approx(p.eps_grid[i]).margin(1e-12));
    REQUIRE(t.f_target[i] == Catch::Approx(p.f_target[i]).margin(1e-12));
    REQUIRE(t.f_identity[i] == Catch::Approx(p.f_identity[i]).margin(1e-12));
  }

  REQUIRE_THROWS_AS(nbgate::parse_profile_csv("eps,a,b\n0,1,1\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(nbgate::parse_profile_csv("epsilon,f_target,f_identity\n0,1\n"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(nbgate::parse_profile_csv("epsilon,f_target,f_identity\n0,1,x\n"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(nbgate::parse_profile_csv(""), std::invalid_argument);
}
