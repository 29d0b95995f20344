#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "lorentzlab/concave.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/harness.hpp"
#include "lorentzlab/optimal_range.hpp"
#include "lorentzlab/spectral.hpp"

using namespace lorentzlab;
using concave::ConcaveFn;
using spectral::cdouble;
using spectral::CMatrix;
using spectral::LipschitzFn;

namespace {

CMatrix diag3(double a, double b, double c) {
  CMatrix m = CMatrix::zero(3);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  m.at(2, 2) = c;
  m.hermitian = true;
  return m;
}

double sorted_diff(std::vector<double> a, std::vector<double> b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("matrix basics: identity, adjoint, hermitian check, frobenius") {
  auto id = CMatrix::identity(3);
  CHECK(id.is_hermitian());
  CHECK(id.frobenius() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  auto m = CMatrix::from_rows({{cdouble(1, 0), cdouble(2, 3)},
                               {cdouble(0, 1), cdouble(4, 0)}});
  auto ma = m.adjoint();
  CHECK(ma.at(0, 1) == cdouble(0, -1));
  CHECK(ma.at(1, 0) == cdouble(2, -3));
  CHECK_FALSE(m.is_hermitian());

  auto h = CMatrix::from_rows({{cdouble(2, 0), cdouble(0, 1)},
                               {cdouble(0, -1), cdouble(2, 0)}});
  CHECK(h.is_hermitian());
  CHECK(m.max_abs() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("matrix algebra: product and commutator") {
  auto a = CMatrix::from_rows({{cdouble(0, 0), cdouble(0, 0)},
                               {cdouble(0, 0), cdouble(1, 0)}});
  auto b = CMatrix::from_rows({{cdouble(1, 0), cdouble(2, 0)},
                               {cdouble(3, 0), cdouble(4, 0)}});
  auto c = spectral::commutator(a, b);
  CHECK(c.at(0, 0) == cdouble(0, 0));
  CHECK(c.at(0, 1) == cdouble(-2, 0));
  CHECK(c.at(1, 0) == cdouble(3, 0));
  CHECK(c.at(1, 1) == cdouble(0, 0));
  CHECK_THROWS_AS(spectral::commutator(a, CMatrix::identity(3)),
                  DimensionMismatchError);
}

TEST_CASE("singular values of reference matrices") {
  auto s1 = spectral::singular_values(diag3(3.0, 1.0, 2.0));
  REQUIRE(s1.size() == 3);
  CHECK(s1[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s1[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s1[2] == doctest::Approx(1.0).epsilon(1e-12));

  auto rot = CMatrix::from_rows({{cdouble(0, 0), cdouble(-1, 0)},
                                 {cdouble(1, 0), cdouble(0, 0)}});
  auto s2 = spectral::singular_values(rot);
  CHECK(s2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s2[1] == doctest::Approx(1.0).epsilon(1e-12));

  auto ones = CMatrix::from_rows({{cdouble(1, 0), cdouble(1, 0)},
                                  {cdouble(1, 0), cdouble(1, 0)}});
  auto s3 = spectral::singular_values(ones);
  CHECK(s3[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s3[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("singular values square-sum to the frobenius norm") {
  harness::CorpusSpec spec{harness::CorpusKind::GaussianMatrices, 7, 4, 6, 8,
                           6.0};
  for (const auto& v : harness::gen_gaussian_matrices(spec)) {
    auto s = spectral::singular_values(v);
    double sum = 0.0;
    for (double x : s) sum += x * x;
    CHECK(std::sqrt(sum) == doctest::Approx(v.frobenius()).epsilon(1e-9));
    for (size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1] + 1e-12);
  }
}

TEST_CASE("hermitian eigensystem diagonalizes and orders ascending") {
  auto h = CMatrix::from_rows({{cdouble(2, 0), cdouble(0, 1)},
                               {cdouble(0, -1), cdouble(2, 0)}});
  auto es = spectral::hermitian_eigensystem(h);
  REQUIRE(es.eigenvalues.size() == 2);
  CHECK(es.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(es.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));

  // residual ||A u - lambda u|| per eigenpair
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      cdouble acc(0, 0);
      for (int j = 0; j < 2; ++j) acc += h.at(i, j) * es.vectors.at(j, k);
      CHECK(std::abs(acc - es.eigenvalues[static_cast<size_t>(k)] *
                               es.vectors.at(i, k)) < 1e-12);
    }
  }

  // unitarity of the eigenvector matrix
  auto gram = es.vectors.adjoint() * es.vectors;
  CHECK((gram - CMatrix::identity(2)).max_abs() < 1e-12);

  auto bad = CMatrix::from_rows({{cdouble(1, 0), cdouble(1, 0)},
                                 {cdouble(0, 0), cdouble(1, 0)}});
  CHECK_THROWS_AS(spectral::hermitian_eigensystem(bad), NotHermitianError);
}

TEST_CASE("schatten lorentz norm of the identity is the log anchor") {
  CHECK(spectral::schatten_lorentz_norm(CMatrix::identity(2),
                                        ConcaveFn::log1p()) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(spectral::schatten_lorentz_norm(diag3(3.0, 1.0, 2.0),
                                        ConcaveFn::power(1.0)) ==
        doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("triangular truncation: sign mask, involution up to diagonal") {
  auto v = CMatrix::from_rows({{cdouble(1, 1), cdouble(2, 0)},
                               {cdouble(3, 0), cdouble(4, -1)}});
  auto t = spectral::triangular_truncate(v);
  CHECK(t.at(0, 0) == cdouble(0, 0));
  CHECK(t.at(0, 1) == cdouble(-2, 0));
  CHECK(t.at(1, 0) == cdouble(3, 0));
  CHECK(t.at(1, 1) == cdouble(0, 0));

  auto tt = spectral::triangular_truncate(t);
  CHECK(tt.at(0, 1) == cdouble(2, 0));
  CHECK(tt.at(1, 0) == cdouble(3, 0));
  CHECK(tt.at(0, 0) == cdouble(0, 0));

  auto d = diag3(1.0, -2.0, 5.0);
  CHECK(spectral::triangular_truncate(d).max_abs() == 0.0);

  auto p = spectral::upper_triangle_project(v);
  CHECK(p.at(0, 0) == cdouble(1, 1));
  CHECK(p.at(0, 1) == cdouble(2, 0));
  CHECK(p.at(1, 0) == cdouble(0, 0));
  CHECK(p.at(1, 1) == cdouble(4, -1));
}

TEST_CASE("truncation of a hermitian matrix is skew-hermitian") {
  auto h = CMatrix::from_rows({{cdouble(2, 0), cdouble(1, 2)},
                               {cdouble(1, -2), cdouble(-1, 0)}});
  auto t = spectral::triangular_truncate(h);
  auto sum = t + t.adjoint();
  CHECK(sum.max_abs() < 1e-15);
}

TEST_CASE("truncation never grows the frobenius norm") {
  harness::CorpusSpec spec{harness::CorpusKind::GaussianMatrices, 11, 6, 8, 8,
                           6.0};
  for (const auto& v : harness::gen_gaussian_matrices(spec)) {
    CHECK(spectral::triangular_truncate(v).frobenius() <= v.frobenius());
  }
}

TEST_CASE("singular values of the truncation ignore diagonal phases") {
  harness::CorpusSpec spec{harness::CorpusKind::GaussianMatrices, 5, 1, 4, 8,
                           6.0};
  auto v = harness::gen_gaussian_matrices(spec)[0];
  CMatrix d = CMatrix::zero(4);
  double th[] = {0.3, 1.1, -2.0, 2.6};
  for (int i = 0; i < 4; ++i) d.at(i, i) = std::polar(1.0, th[i]);
  auto conj = d * v * d.adjoint();
  auto s1 = spectral::singular_values(spectral::triangular_truncate(v));
  auto s2 = spectral::singular_values(spectral::triangular_truncate(conj));
  CHECK(sorted_diff(s1, s2) < 1e-10);
}

TEST_CASE("weak-(1,1) probe on two-by-two matrices stays below two") {
  harness::CorpusSpec spec{harness::CorpusKind::GaussianMatrices, 3, 50, 2, 8,
                           6.0};
  for (const auto& v : harness::gen_gaussian_matrices(spec)) {
    CHECK(spectral::weak_l1_probe(v) <= 2.0 + 1e-12);
  }
  CHECK_THROWS_AS(spectral::weak_l1_probe(CMatrix::zero(3)), ZeroMatrixError);
}

TEST_CASE("piecewise-linear functions evaluate and extend by end slopes") {
  auto f = LipschitzFn::make({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}});
  CHECK(f(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f(3.0) == doctest::Approx(-1.0).epsilon(1e-15));   // slope -1 past 2
  CHECK(f(-2.0) == doctest::Approx(-2.0).epsilon(1e-15));  // slope 1 before 0
  CHECK(f.lip_constant() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("functions of hermitian matrices: identity and constants") {
  auto h = CMatrix::from_rows({{cdouble(2, 0), cdouble(0, 1)},
                               {cdouble(0, -1), cdouble(2, 0)}});
  auto ident = LipschitzFn::make({{-10.0, -10.0}, {10.0, 10.0}});
  auto fh = spectral::function_of_hermitian(ident, h);
  CHECK((fh - h).max_abs() < 1e-12);

  auto flat = LipschitzFn::make({{-10.0, 3.0}, {10.0, 3.0}});
  auto c = spectral::function_of_hermitian(flat, h);
  CHECK((c - cdouble(3.0, 0.0) * CMatrix::identity(2)).max_abs() < 1e-12);
}

TEST_CASE("divided-difference multiplier on a two-level diagonal") {
  CMatrix a = CMatrix::zero(2);
  a.at(1, 1) = 1.0;
  a.hermitian = true;
  auto sq = LipschitzFn::make({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}});
  auto v = CMatrix::from_rows({{cdouble(5, 0), cdouble(2, 1)},
                               {cdouble(1, -3), cdouble(7, 0)}});
  auto out = spectral::doi_apply(sq, a, v);
  // off-diagonal slope (f(1)-f(0))/(1-0) = 1, diagonal zeroed by convention
  CHECK(std::abs(out.at(0, 0)) < 1e-12);
  CHECK(std::abs(out.at(1, 1)) < 1e-12);
  CHECK(std::abs(out.at(0, 1) - cdouble(2, 1)) < 1e-12);
  CHECK(std::abs(out.at(1, 0) - cdouble(1, -3)) < 1e-12);
}

TEST_CASE("divided-difference multiplier vanishes on scalar matrices") {
  auto a = cdouble(2.5, 0.0) * CMatrix::identity(3);
  auto am = a;
  am.hermitian = true;
  auto f = LipschitzFn::make({{0.0, 0.0}, {5.0, 3.0}});
  auto v = CMatrix::from_rows({{cdouble(1, 0), cdouble(2, 2), cdouble(0, 1)},
                               {cdouble(3, 0), cdouble(0, 0), cdouble(1, 1)},
                               {cdouble(0, -1), cdouble(2, 0), cdouble(4, 0)}});
  CHECK(spectral::doi_apply(f, am, v).max_abs() < 1e-10);
}

TEST_CASE("multiplier linearity in the perturbation") {
  auto a = CMatrix::from_rows({{cdouble(1, 0), cdouble(0, 2)},
                               {cdouble(0, -2), cdouble(-1, 0)}});
  auto f = LipschitzFn::make({{-4.0, 1.0}, {0.0, 0.0}, {4.0, 2.0}});
  auto v = CMatrix::from_rows({{cdouble(1, 1), cdouble(2, 0)},
                               {cdouble(0, 3), cdouble(1, 0)}});
  auto w = CMatrix::from_rows({{cdouble(0, 1), cdouble(1, -1)},
                               {cdouble(2, 0), cdouble(0, 0)}});
  auto lhs = spectral::doi_apply(f, a, v + w);
  auto rhs = spectral::doi_apply(f, a, v) + spectral::doi_apply(f, a, w);
  CHECK((lhs - rhs).max_abs() < 1e-12);
}

TEST_CASE("commutator identity holds exactly, including repeated eigenvalues") {
  auto f = LipschitzFn::make({{-3.0, 2.0}, {0.0, 0.0}, {2.0, 1.0}, {3.0, 1.5}});
  auto a = CMatrix::from_rows({{cdouble(1, 0), cdouble(0, 1), cdouble(0, 0)},
                               {cdouble(0, -1), cdouble(2, 0), cdouble(1, 0)},
                               {cdouble(0, 0), cdouble(1, 0), cdouble(-1, 0)}});
  auto b = CMatrix::from_rows({{cdouble(0, 0), cdouble(2, 1), cdouble(1, 0)},
                               {cdouble(2, -1), cdouble(1, 0), cdouble(0, 2)},
                               {cdouble(1, 0), cdouble(0, -2), cdouble(3, 0)}});
  auto rep = spectral::commutator_identity_check(f, a, b);
  CHECK(rep.ok);
  CHECK(rep.deviation <= 1e-10 * rep.scale);

  auto rep2 = spectral::commutator_identity_check(f, diag3(1.0, 1.0, 2.0), b);
  CHECK(rep2.ok);
}

TEST_CASE("linear functions commute through the identity with slope") {
  CMatrix a = CMatrix::zero(2);
  a.at(1, 1) = 1.0;
  a.hermitian = true;
  auto b = CMatrix::from_rows({{cdouble(1, 0), cdouble(2, 1)},
                               {cdouble(0, 3), cdouble(4, 0)}});
  double slope = 2.5;
  auto f = LipschitzFn::make({{-1.0, -slope}, {1.0, slope}});
  auto lhs = spectral::doi_apply(f, a, spectral::commutator(a, b));
  auto want = cdouble(slope, 0.0) * spectral::commutator(a, b);
  CHECK((lhs - want).max_abs() < 1e-12);
}

TEST_CASE("truncation range probe produces finite per-sample ratios") {
  harness::CorpusSpec spec{harness::CorpusKind::GaussianMatrices, 42, 4, 8, 8,
                           6.0};
  auto corpus = harness::gen_gaussian_matrices(spec);
  auto phi = ConcaveFn::power(0.5);
  auto tab = range::default_psi_table(phi);
  auto res = spectral::truncation_range_probe(corpus, phi, tab.fn, 1);
  REQUIRE(res.norm_ratios.size() == corpus.size());
  REQUIRE(res.pointwise_ratios.size() == corpus.size());
  for (double r : res.norm_ratios) {
    CHECK(r > 0.0);
    CHECK(std::isfinite(r));
  }
  double m = *std::max_element(res.norm_ratios.begin(), res.norm_ratios.end());
  CHECK(res.max_norm_ratio == doctest::Approx(m).epsilon(1e-15));

  // serial and threaded runs agree bitwise
  auto res4 = spectral::truncation_range_probe(corpus, phi, tab.fn, 4);
  for (size_t i = 0; i < corpus.size(); ++i) {
    CHECK(res.norm_ratios[i] == res4.norm_ratios[i]);
    CHECK(res.pointwise_ratios[i] == res4.pointwise_ratios[i]);
  }
}

TEST_CASE("operator lipschitz probe: ratios and guards") {
  auto f = LipschitzFn::make({{-3.0, 1.0}, {0.0, 0.0}, {3.0, 2.0}});
  harness::CorpusSpec spec{harness::CorpusKind::HermitianPairs, 9, 1, 6, 8,
                           6.0};
  auto pr = harness::gen_hermitian_pairs(spec)[0];
  auto phi = ConcaveFn::power(0.5);
  auto tab = range::default_psi_table(phi);
  auto res = spectral::lipschitz_probe(f, pr.first, pr.second, phi, tab.fn);
  CHECK(res.ratio > 0.0);
  CHECK(std::isfinite(res.ratio));
  CHECK(res.block_ratio > 0.0);
  CHECK_THROWS_AS(
      spectral::lipschitz_probe(f, pr.first, pr.first, phi, tab.fn),
      ZeroDifferenceError);
}
