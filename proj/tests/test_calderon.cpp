#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lorentzlab/calderon.hpp"
#include "lorentzlab/concave.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/rearrangement.hpp"

using namespace lorentzlab;
using concave::ConcaveFn;
using rearrangement::DecreasingStep;
using rearrangement::Seq;
using rearrangement::StepFn;

TEST_CASE("image of an indicator is the classical kernel profile") {
  auto img = calderon::apply_calderon(DecreasingStep::indicator(1.0));
  CHECK(img(0.5) == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-15));
  CHECK(img(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(img(2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(img.head_slope() == 1.0);
  CHECK(img.tail_mass() == 1.0);

  auto scaled = calderon::apply_calderon(DecreasingStep::indicator(4.0, 3.0));
  CHECK(scaled(1.0) == doctest::Approx(3.0 * (1.0 + std::log(4.0))).epsilon(1e-15));
  CHECK(scaled(8.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("images add over layers and agree with direct evaluation") {
  auto mu = DecreasingStep::make({{2.0, 0.5}, {1.0, 3.0}});
  auto img = calderon::apply_calderon(mu);
  auto x = mu.to_step_fn();
  for (double t : {0.1, 0.4, 0.5, 1.0, 2.0, 3.0, 10.0}) {
    CHECK(img(t) == doctest::Approx(calderon::calderon_of_step(x, t))
                        .epsilon(1e-13));
  }
  CHECK(img.tail_mass() == doctest::Approx(mu.total_integral()).epsilon(1e-15));
}

TEST_CASE("the image is nonincreasing and continuous across support ends") {
  auto img = calderon::apply_calderon(
      DecreasingStep::make({{1.0, 1.0}, {0.5, 4.0}}));
  double prev = img(1e-4);
  for (double t = 2e-4; t < 1e3; t *= 1.3) {
    double cur = img(t);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK(img(4.0 - 1e-9) == doctest::Approx(img(4.0 + 1e-9)).epsilon(1e-6));
}

TEST_CASE("signed steps evaluate exactly through both kernel terms") {
  auto x = StepFn::make({1.0, 2.0}, {2.0, -1.0});
  // t = 0.5 < 1: mean term (1/t)*t*2 = 2, tail 2*log(1/0.5)... piecewise:
  // int_t^1 2/s + int_1^2 (-1)/s = 2*log(2) - log(2) = log 2
  CHECK(calderon::calderon_of_step(x, 0.5) ==
        doctest::Approx(2.0 + std::log(2.0)).epsilon(1e-14));
  // t = 4 beyond support: (1/4) * (2 - 1) = 0.25
  CHECK(calderon::calderon_of_step(x, 4.0) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("discrete operator reproduces the unit-vector image") {
  Seq e1{{0.0, 1.0}};
  auto out = calderon::apply_discrete_calderon(e1, 2);
  REQUIRE(out.entries.size() == 3);
  CHECK(out.entries[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.entries[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.entries[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("discrete operator is monotone on nonnegative decreasing input") {
  Seq a{{4.0, 2.0, 1.0, 0.5}};
  auto out = calderon::apply_discrete_calderon(a, 12);
  for (size_t i = 1; i < out.entries.size(); ++i) {
    CHECK(out.entries[i] <= out.entries[i - 1] + 1e-15);
  }
}

TEST_CASE("hilbert transform of the unit indicator") {
  auto x = StepFn::make({1.0}, {1.0});
  CHECK(calderon::hilbert_of_step(x, -1.0) ==
        doctest::Approx(-std::log(2.0) / M_PI).epsilon(1e-14));
  CHECK(std::abs(calderon::hilbert_of_step(x, -1.0)) ==
        doctest::Approx(0.2206356001526516).epsilon(1e-12));
  CHECK(calderon::hilbert_of_step(x, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(calderon::hilbert_of_step(x, 2.0) ==
        doctest::Approx(std::log(2.0) / M_PI).epsilon(1e-14));
  CHECK_THROWS_AS(calderon::hilbert_of_step(x, 1.0), AtSingularityError);
  CHECK_THROWS_AS(calderon::hilbert_of_step(x, 1e-14), AtSingularityError);
}

TEST_CASE("hilbert domination holds at the unit anchor") {
  auto mu = DecreasingStep::indicator(1.0);
  auto rep = calderon::check_hilbert_domination(mu, {1.0});
  CHECK(rep.passed);
  CHECK(rep.min_slack == doctest::Approx(std::log(2.0) / M_PI -
                                         1.0 / (2.0 * M_PI))
                             .epsilon(1e-12));
  CHECK(rep.argmin_t == 1.0);

  auto layered = DecreasingStep::make({{1.0, 0.5}, {2.0, 2.0}});
  auto rep2 = calderon::check_hilbert_domination(
      layered, concave::geometric_grid(1e-3, 1e3, 25));
  CHECK(rep2.passed);
}

TEST_CASE("rearrangement estimate is sorted and undershoots the spikes") {
  auto x = StepFn::make({1.0}, {1.0});
  auto est = calderon::hilbert_rearrangement_estimate(x, 2048, 16.0);
  REQUIRE(!est.values.empty());
  CHECK(est.cell_width > 0.0);
  for (size_t i = 1; i < est.values.size(); ++i) {
    CHECK(est.values[i] <= est.values[i - 1]);
  }
  // grid sampling truncates the logarithmic spikes near the breakpoints
  CHECK(est.values.front() < 3.0);
}

TEST_CASE("L1+Linf norm of an image uses the closed antiderivative") {
  auto at = [](double u) {
    return calderon::l1_linf_norm(
        calderon::apply_calderon(DecreasingStep::indicator(u)));
  };
  CHECK(at(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(at(std::exp(1.0)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(at(0.5) == doctest::Approx(0.5 * (2.0 - std::log(0.5))).epsilon(1e-15));
}

TEST_CASE("lorentz norm of an image matches its quadrature oracle") {
  auto img = calderon::apply_calderon(
      DecreasingStep::make({{1.0, 0.25}, {0.5, 2.0}}));
  for (const auto& psi : {ConcaveFn::power(0.5), ConcaveFn::log1p()}) {
    double closed = calderon::image_lorentz_norm(img, psi);
    double quad = calderon::image_lorentz_norm_oracle(img, psi);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
  }
}

TEST_CASE("lorentz norm of the unit image hits the frozen anchors") {
  auto img = calderon::apply_calderon(DecreasingStep::indicator(1.0));
  CHECK(calderon::image_lorentz_norm(img, ConcaveFn::power(0.5)) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(calderon::image_lorentz_norm(img, ConcaveFn::log1p()) ==
        doctest::Approx(2.2087613945440037).epsilon(1e-9));
  CHECK(calderon::image_lorentz_norm(img, ConcaveFn::phi_zero()) ==
        doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("a linear range weight has no finite image norm") {
  auto img = calderon::apply_calderon(DecreasingStep::indicator(1.0));
  CHECK_THROWS_AS(calderon::image_lorentz_norm(img, ConcaveFn::power(1.0)),
                  TailDivergentError);
}
