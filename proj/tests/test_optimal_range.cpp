#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lorentzlab/calderon.hpp"
#include "lorentzlab/concave.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/optimal_range.hpp"
#include "lorentzlab/rearrangement.hpp"

using namespace lorentzlab;
using concave::ConcaveFn;
using rearrangement::DecreasingStep;

TEST_CASE("induced weight of a power matches the closed form") {
  // inf_w (u w)^a / (1 + log w) is attained at w = e^{1/a - 1}
  for (double a : {0.25, 0.5, 0.75}) {
    auto phi = ConcaveFn::power(a);
    double w_star = std::exp(1.0 / a - 1.0);
    for (double u : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
      auto p = range::psi_from_phi(phi, u);
      double expect = a * std::exp(1.0 - a) * std::pow(u, a);
      CHECK(p.value == doctest::Approx(expect).epsilon(1e-9));
      CHECK(p.w_star == doctest::Approx(w_star).epsilon(1e-6));
    }
  }
  auto p = range::psi_from_phi(ConcaveFn::power(0.5), 1.0);
  CHECK(p.value == doctest::Approx(0.8243606353500641).epsilon(1e-12));
}

TEST_CASE("a linear weight induces itself") {
  auto phi = ConcaveFn::power(1.0);
  for (double u : {0.01, 1.0, 100.0}) {
    auto p = range::psi_from_phi(phi, u);
    CHECK(p.value == doctest::Approx(u).epsilon(1e-9));
    CHECK(p.w_star == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("the induced weight never exceeds the weight itself") {
  for (const auto& phi : {ConcaveFn::power(0.3), ConcaveFn::log1p(),
                          ConcaveFn::phi_zero()}) {
    for (double u : concave::geometric_grid(1e-6, 1e6, 25)) {
      CHECK(range::psi_from_phi(phi, u).value <= phi(u) * (1.0 + 1e-12));
    }
  }
  CHECK_THROWS_AS(range::psi_from_phi(ConcaveFn::log1p(), 0.0), BadSpecError);
}

TEST_CASE("psi tables interpolate to table accuracy and stay concave") {
  auto tab = range::default_psi_table(ConcaveFn::power(0.5));
  CHECK_FALSE(tab.repaired);
  for (double u : {1e-6, 1e-2, 1.0, 1e2, 1e6}) {
    double expect = 0.5 * std::exp(0.5) * std::sqrt(u);
    CHECK(tab.fn(u) == doctest::Approx(expect).epsilon(1e-3));
  }
  auto diag = concave::check_concave_increasing(tab.fn,
                                                concave::default_probe_grid());
  CHECK(diag.concave);
}

TEST_CASE("vanishing-limit probe for the log ceiling") {
  auto rep = range::psi_limit_check(ConcaveFn::power(0.5));
  CHECK(rep.passed);
  CHECK(rep.tail_decreasing);
  CHECK(rep.final_over_initial < 0.05);
  REQUIRE(rep.u.size() == rep.values.size());
  for (double v : rep.values) CHECK(v > 0.0);
}

TEST_CASE("tail models: closed forms pass through, a linear tail diverges") {
  auto tm = range::tail_model(ConcaveFn::power(0.5));
  CHECK_FALSE(tm.from_fit);
  CHECK(tm.alpha == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(tm.divergent);

  CHECK(range::tail_model(ConcaveFn::power(1.0)).divergent);

  auto flat = ConcaveFn::piecewise_linear({{1.0, 1.0}, {2.0, 1.0}});
  auto ft = range::tail_model(flat);
  CHECK_FALSE(ft.divergent);
  CHECK(ft.alpha == doctest::Approx(0.0).epsilon(1e-9));

  auto steep = ConcaveFn::piecewise_linear({{1.0, 1.0}, {2.0, 2.0}});
  CHECK(range::tail_model(steep).divergent);
}

TEST_CASE("indicator image norms hit the closed-form anchors") {
  CHECK(range::indicator_image_norm(ConcaveFn::power(0.5), 1.0) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(range::indicator_image_norm(ConcaveFn::power(0.25), 1.0) ==
        doctest::Approx(4.0 + 4.0 / 3.0).epsilon(1e-14));
  CHECK(range::indicator_image_norm(ConcaveFn::log1p(), 1.0) ==
        doctest::Approx(2.2087613945440037).epsilon(1e-10));
  CHECK(range::indicator_image_norm(ConcaveFn::phi_zero(), 1.0) ==
        doctest::Approx(7.0).epsilon(1e-14));
  CHECK(range::image_head_integral(ConcaveFn::log1p(), 1.0) ==
        doctest::Approx(0.8224670334241132).epsilon(1e-10));
  CHECK_THROWS_AS(range::image_tail_integral(ConcaveFn::power(1.0), 1.0),
                  TailDivergentError);
}

TEST_CASE("image norms scale like the weight for power psi") {
  auto psi = ConcaveFn::power(0.5);
  for (double u : {0.01, 0.7, 13.0}) {
    CHECK(range::indicator_image_norm(psi, u) ==
          doctest::Approx(4.0 * std::sqrt(u)).epsilon(1e-13));
  }
}

TEST_CASE("continuous criterion: self-pairing of the square root is flat 4") {
  auto phi = ConcaveFn::power(0.5);
  auto rep = range::criterion_continuous(phi, phi,
                                         concave::geometric_grid(1e-4, 1e4, 65));
  CHECK(rep.verdict == range::Verdict::BoundedWithC);
  CHECK(rep.c_estimate == doctest::Approx(4.0).epsilon(1e-12));
  for (double r : rep.ratios) CHECK(r == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("continuous criterion: divergent range weight is caught") {
  auto rep = range::criterion_continuous(
      ConcaveFn::power(1.0), ConcaveFn::power(1.0),
      concave::geometric_grid(1e-4, 1e4, 65));
  CHECK(rep.verdict == range::Verdict::TailDivergent);
  CHECK(rep.ratios.empty());
}

TEST_CASE("discrete criterion: square-root weight settles in the bounded band") {
  auto rep = range::criterion_discrete(ConcaveFn::power(0.5), 4096);
  CHECK(rep.verdict == range::Verdict::BoundedWithC);
  REQUIRE(rep.u_grid.size() == 4096);
  CHECK(rep.ratios[63] == doctest::Approx(3.7893951379961965).epsilon(1e-9));
  CHECK(rep.ratios[4095] == doctest::Approx(3.9766993433534554).epsilon(1e-9));
  CHECK(rep.ratios[0] == doctest::Approx(2.1123753486855037).epsilon(1e-9));
  for (size_t i = 63; i < rep.ratios.size(); ++i) {
    CHECK(rep.ratios[i] >= 3.0);
    CHECK(rep.ratios[i] <= 5.0);
  }
  CHECK_THROWS_AS(range::criterion_discrete(ConcaveFn::power(0.5), 32),
                  BadSpecError);
}

TEST_CASE("discrete criterion: linear weight is flagged as unbounded") {
  auto rep = range::criterion_discrete(ConcaveFn::power(1.0), 512);
  CHECK(rep.verdict == range::Verdict::RatioUnboundedTrend);
}

TEST_CASE("indicator witness reproduces the optimal dilation") {
  auto wit = range::witness_indicator(ConcaveFn::power(0.5), 1.0);
  CHECK(wit.w_used == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
  CHECK(wit.norm_phi == doctest::Approx(std::sqrt(std::exp(1.0)) / 2.0)
                            .epsilon(1e-9));
  CHECK(wit.psi_u == doctest::Approx(0.8243606353500641).epsilon(1e-9));
  CHECK(wit.norm_phi <= 2.0 * wit.psi_u + 1e-12);
  CHECK(wit.domination_ok);
  CHECK(wit.norm_ok);
  CHECK(wit.min_slack >= -1e-9);
}

TEST_CASE("general witness covers the unit indicator with ratio four") {
  auto x = DecreasingStep::indicator(1.0);
  auto wit = range::witness_general(x, ConcaveFn::power(0.5));
  CHECK(wit.norm_y_phi == doctest::Approx(2.0 * std::sqrt(std::exp(1.0)))
                              .epsilon(1e-9));
  CHECK(wit.norm_x_psi == doctest::Approx(0.8243606353500641).epsilon(1e-9));
  CHECK(wit.ratio == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(wit.domination_ok);
  CHECK(wit.factor8_ok);
}

TEST_CASE("general witness handles a layered target") {
  auto x = DecreasingStep::make({{0.7, 0.3}, {2.4, 5.0}, {0.1, 40.0}});
  auto wit = range::witness_general(x, ConcaveFn::log1p());
  CHECK(wit.domination_ok);
  CHECK(wit.factor8_ok);
  CHECK(wit.ratio <= 8.0 + 1e-9);
  CHECK(wit.min_slack >= -1e-9);
}

TEST_CASE("phi0 sandwich is exact on the unit indicator") {
  auto rep = range::phi0_sandwich_check(DecreasingStep::indicator(1.0));
  CHECK(rep.passed);
  CHECK(rep.image_norm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.lorentz_phi0_norm == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("phi0 sandwich holds on layered steps") {
  auto x = DecreasingStep::make({{3.0, 0.02}, {1.0, 1.5}, {0.25, 80.0}});
  auto rep = range::phi0_sandwich_check(x);
  CHECK(rep.passed);
  CHECK(rep.image_norm <= rep.lorentz_phi0_norm * (1.0 + 1e-9));
  CHECK(rep.lorentz_phi0_norm <= 2.0 * rep.image_norm * (1.0 + 1e-9));
}
