#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lorentzlab/concave.hpp"
#include "lorentzlab/errors.hpp"

using namespace lorentzlab;
using concave::ConcaveFn;
using concave::Knot;

TEST_CASE("closed-form families evaluate exactly") {
  auto sq = ConcaveFn::power(0.5);
  CHECK(sq(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sq(0.0) == 0.0);

  auto lin = ConcaveFn::power(1.0);
  CHECK(lin(7.0) == doctest::Approx(7.0).epsilon(1e-15));

  auto lg = ConcaveFn::log1p();
  CHECK(lg(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lg(0.0) == 0.0);

  auto p0 = ConcaveFn::phi_zero();
  CHECK(p0(1.0) == doctest::Approx(2.0).epsilon(1e-15));          // 1*log(e^2)
  CHECK(p0(std::exp(2.0)) == doctest::Approx(6.0).epsilon(1e-14));  // 2*log(e^3)
  CHECK(p0(0.5) ==
        doctest::Approx(1.0 + 0.5 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("power exponent must lie in (0, 1]") {
  CHECK_THROWS_AS(ConcaveFn::power(0.0), BadSpecError);
  CHECK_THROWS_AS(ConcaveFn::power(1.5), BadSpecError);
  CHECK_THROWS_AS(ConcaveFn::power(-0.5), BadSpecError);
}

TEST_CASE("piecewise linear interpolates, extends, reports final slope") {
  auto f = ConcaveFn::piecewise_linear({{1.0, 1.0}, {4.0, 2.0}});
  CHECK(f(0.5) == doctest::Approx(0.5).epsilon(1e-15));  // through the origin
  CHECK(f(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f(2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(f(10.0) == doctest::Approx(4.0).epsilon(1e-15));  // slope 1/3 past 4
  CHECK(f.final_slope() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f(0.0) == 0.0);
}

TEST_CASE("flat tail clamps the extension slope at zero") {
  auto f = ConcaveFn::piecewise_linear({{1.0, 1.0}, {2.0, 1.0}});
  CHECK(f.final_slope() == 0.0);
  CHECK(f(100.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("geometric grid spans the requested range") {
  auto g = concave::geometric_grid(1e-2, 1e2, 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(g.back() == doctest::Approx(1e2).epsilon(1e-12));
  CHECK(g[4] == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("concavity diagnostic accepts the concave families") {
  const auto& grid = concave::default_probe_grid();
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    auto d = concave::check_concave_increasing(ConcaveFn::power(a), grid);
    CHECK(d.passed);
  }
  CHECK(concave::check_concave_increasing(ConcaveFn::log1p(), grid).passed);
}

TEST_CASE("concavity diagnostic flags the quasiconcave corner weight") {
  auto d = concave::check_concave_increasing(ConcaveFn::phi_zero(),
                                             concave::default_probe_grid());
  CHECK_FALSE(d.passed);
  CHECK(d.monotone);
  CHECK_FALSE(d.concave);
  CHECK(d.ratio_decreasing);  // phi0(t)/t is nonincreasing even so
  REQUIRE(d.first_violation.has_value());
}

TEST_CASE("concavity diagnostic flags a convex kink") {
  auto f = ConcaveFn::piecewise_linear({{1.0, 1.0}, {2.0, 4.0}});
  auto d = concave::check_concave_increasing(f, concave::default_probe_grid());
  CHECK_FALSE(d.passed);
  CHECK_FALSE(d.concave);
}

TEST_CASE("least concave majorant is the upper hull and a fixed point") {
  std::vector<Knot> pts = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {4.0, 2.0}};
  auto hull = concave::least_concave_majorant(pts);
  REQUIRE(hull.knots().size() == 3);
  CHECK(hull.knots()[0].t == 0.0);
  CHECK(hull.knots()[1].t == 1.0);
  CHECK(hull.knots()[2].t == 4.0);
  CHECK(hull(2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(hull(1.0) == doctest::Approx(1.0).epsilon(1e-15));

  auto again = concave::least_concave_majorant(hull.knots());
  REQUIRE(again.knots().size() == hull.knots().size());
  for (size_t i = 0; i < hull.knots().size(); ++i) {
    CHECK(again.knots()[i].t == hull.knots()[i].t);
    CHECK(again.knots()[i].v == hull.knots()[i].v);
  }

  CHECK_THROWS_AS(concave::least_concave_majorant({}), EmptyInputError);
}

TEST_CASE("majorant dominates its input points") {
  std::vector<Knot> pts;
  for (int i = 1; i <= 40; ++i) {
    double t = 0.25 * i;
    pts.push_back({t, std::sqrt(t) * (1.0 + 0.2 * std::sin(3.0 * t))});
  }
  auto hull = concave::least_concave_majorant(pts);
  for (const auto& p : pts) CHECK(hull(p.t) >= p.v - 1e-12);
  auto d = concave::check_concave_increasing(hull, concave::default_probe_grid());
  CHECK(d.concave);
}

TEST_CASE("dilation function of a power weight is the exact power") {
  auto f = ConcaveFn::power(0.5);
  CHECK(concave::dilation_function(f, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(concave::dilation_function(f, 0.25) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dilation indices bracket the growth exponents") {
  auto di = concave::dilation_indices(ConcaveFn::power(0.5));
  CHECK(di.lower == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(di.upper == doctest::Approx(0.5).epsilon(1e-6));

  // min(t, 1): flat tail, linear head
  auto flat = ConcaveFn::piecewise_linear({{1.0, 1.0}, {2.0, 1.0}});
  auto df = concave::dilation_indices(flat);
  CHECK(df.lower == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(df.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(df.lower <= df.upper);
}

TEST_CASE("log-Lorentz embedding probe") {
  auto v = concave::embeds_in_lambda_log(ConcaveFn::power(0.5));
  CHECK(v.holds);
  CHECK(v.constant == doctest::Approx(0.8047).epsilon(0.03));

  auto self = concave::embeds_in_lambda_log(ConcaveFn::log1p());
  CHECK(self.holds);
  CHECK(self.constant == doctest::Approx(1.0).epsilon(1e-9));
}
