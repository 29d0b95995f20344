#include "lorentzlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lorentzlab/calderon.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/parallel.hpp"
#include "lorentzlab/rearrangement.hpp"

namespace lorentzlab::spectral {

CMatrix CMatrix::zero(int n) {
  if (n < 0) throw BadSpecError("CMatrix: negative dimension");
  CMatrix m;
  m.n = n;
  m.data.assign(static_cast<size_t>(n) * n, cdouble{0.0, 0.0});
  m.hermitian = true;
  return m;
}

CMatrix CMatrix::identity(int n) {
  CMatrix m = zero(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_rows(const std::vector<std::vector<cdouble>>& rows) {
  int n = static_cast<int>(rows.size());
  CMatrix m = zero(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) {
      throw BadSpecError("CMatrix::from_rows: not square");
    }
    for (int j = 0; j < n; ++j) m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  m.hermitian = m.is_hermitian();
  return m;
}

bool CMatrix::is_hermitian(double tol) const {
  double scale = std::max(1.0, max_abs());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol * scale) return false;
    }
  }
  return true;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& z : data) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double s = 0.0;
  for (const auto& z : data) s = std::max(s, std::abs(z));
  return s;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m = zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.at(i, j) = std::conj(at(j, i));
  }
  m.hermitian = hermitian;
  return m;
}

namespace {

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* who) {
  if (a.n != b.n) throw DimensionMismatchError(who);
}

}  // namespace

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "CMatrix operator+: dimensions differ");
  CMatrix m = a;
  for (size_t i = 0; i < m.data.size(); ++i) m.data[i] += b.data[i];
  m.hermitian = a.hermitian && b.hermitian;
  return m;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "CMatrix operator-: dimensions differ");
  CMatrix m = a;
  for (size_t i = 0; i < m.data.size(); ++i) m.data[i] -= b.data[i];
  m.hermitian = a.hermitian && b.hermitian;
  return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "CMatrix operator*: dimensions differ");
  CMatrix m = CMatrix::zero(a.n);
  m.hermitian = false;
  for (int i = 0; i < a.n; ++i) {
    for (int k = 0; k < a.n; ++k) {
      cdouble aik = a.at(i, k);
      if (aik == cdouble{0.0, 0.0}) continue;
      for (int j = 0; j < a.n; ++j) m.at(i, j) += aik * b.at(k, j);
    }
  }
  return m;
}

CMatrix operator*(cdouble s, const CMatrix& a) {
  CMatrix m = a;
  for (auto& z : m.data) z *= s;
  m.hermitian = a.hermitian && s.imag() == 0.0;
  return m;
}

// ---------------------------------------------------------------------------
// decompositions
// ---------------------------------------------------------------------------

std::vector<double> singular_values(const CMatrix& v) {
  const int n = v.n;
  if (n == 0) return {};
  CMatrix w = v;
  const double tol = 1e-13;
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cdouble gamma{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
          alpha += std::norm(w.at(k, p));
          beta += std::norm(w.at(k, q));
          gamma += std::conj(w.at(k, p)) * w.at(k, q);
        }
        double g = std::abs(gamma);
        if (g <= tol * std::sqrt(alpha * beta) || alpha == 0.0 || beta == 0.0) {
          continue;
        }
        // rotate columns p, q to orthogonality
        cdouble phase = gamma / g;
        double tau = (beta - alpha) / (2.0 * g);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        cdouble cphase = std::conj(phase);
        for (int k = 0; k < n; ++k) {
          cdouble wp = w.at(k, p), wq = w.at(k, q);
          w.at(k, p) = c * wp - s * cphase * wq;
          w.at(k, q) = s * phase * wp + c * wq;
        }
        rotated = true;
      }
    }
    if (!rotated) {
      std::vector<double> sv(static_cast<size_t>(n), 0.0);
      for (int j = 0; j < n; ++j) {
        double a = 0.0;
        for (int k = 0; k < n; ++k) a += std::norm(w.at(k, j));
        sv[static_cast<size_t>(j)] = std::sqrt(a);
      }
      std::sort(sv.begin(), sv.end(), std::greater<>());
      return sv;
    }
  }
  throw ConvergenceError("singular_values: Jacobi sweeps did not converge");
}

Eigensystem hermitian_eigensystem(const CMatrix& a0) {
  if (!a0.is_hermitian()) {
    throw NotHermitianError("hermitian_eigensystem: input is not hermitian");
  }
  const int n = a0.n;
  // symmetrize exactly so the iteration sees conj-consistent entries
  CMatrix a = a0;
  for (int i = 0; i < n; ++i) {
    a.at(i, i) = cdouble{a.at(i, i).real(), 0.0};
    for (int j = i + 1; j < n; ++j) {
      cdouble m = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
      a.at(i, j) = m;
      a.at(j, i) = std::conj(m);
    }
  }
  CMatrix u = CMatrix::identity(n);
  Eigensystem es;
  es.eigenvalues.assign(static_cast<size_t>(n), 0.0);
  double fro = a.frobenius();
  if (fro == 0.0 || n < 2) {
    for (int i = 0; i < n; ++i) es.eigenvalues[static_cast<size_t>(i)] = a.at(i, i).real();
    es.vectors = std::move(u);
    return es;
  }
  const double thresh = 1e-13 * fro;
  bool converged = false;
  for (int sweep = 0; sweep < 64 && !converged; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cdouble gamma = a.at(p, q);
        double g = std::abs(gamma);
        if (g <= thresh) continue;
        double alpha = a.at(p, p).real();
        double beta = a.at(q, q).real();
        cdouble phase = gamma / g;
        cdouble cphase = std::conj(phase);
        double tau = (beta - alpha) / (2.0 * g);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        // A <- A R (columns p, q)
        for (int k = 0; k < n; ++k) {
          cdouble ap = a.at(k, p), aq = a.at(k, q);
          a.at(k, p) = c * ap - s * cphase * aq;
          a.at(k, q) = s * phase * ap + c * aq;
        }
        // A <- R^H A (rows p, q)
        for (int k = 0; k < n; ++k) {
          cdouble ap = a.at(p, k), aq = a.at(q, k);
          a.at(p, k) = c * ap - s * phase * aq;
          a.at(q, k) = s * cphase * ap + c * aq;
        }
        // the rotation annihilates the pivot pair exactly; pin it
        a.at(p, q) = cdouble{0.0, 0.0};
        a.at(q, p) = cdouble{0.0, 0.0};
        a.at(p, p) = cdouble{a.at(p, p).real(), 0.0};
        a.at(q, q) = cdouble{a.at(q, q).real(), 0.0};
        // U <- U R
        for (int k = 0; k < n; ++k) {
          cdouble up = u.at(k, p), uq = u.at(k, q);
          u.at(k, p) = c * up - s * cphase * uq;
          u.at(k, q) = s * phase * up + c * uq;
        }
        rotated = true;
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw ConvergenceError("hermitian_eigensystem: Jacobi sweeps did not converge");
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a.at(i, i).real() < a.at(j, j).real();
  });
  es.vectors = CMatrix::zero(n);
  es.vectors.hermitian = false;
  for (int j = 0; j < n; ++j) {
    int src = order[static_cast<size_t>(j)];
    es.eigenvalues[static_cast<size_t>(j)] = a.at(src, src).real();
    for (int k = 0; k < n; ++k) es.vectors.at(k, j) = u.at(k, src);
  }
  return es;
}

double schatten_lorentz_norm(const CMatrix& v, const concave::ConcaveFn& phi) {
  rearrangement::Seq s;
  s.entries = singular_values(v);
  return rearrangement::lorentz_seq_norm(s, phi);
}

// ---------------------------------------------------------------------------
// triangular truncation
// ---------------------------------------------------------------------------

CMatrix triangular_truncate(const CMatrix& v) {
  CMatrix m = CMatrix::zero(v.n);
  m.hermitian = false;
  for (int i = 0; i < v.n; ++i) {
    for (int j = 0; j < v.n; ++j) {
      if (i > j) {
        m.at(i, j) = v.at(i, j);
      } else if (i < j) {
        m.at(i, j) = -v.at(i, j);
      }
    }
  }
  return m;
}

CMatrix upper_triangle_project(const CMatrix& v) {
  CMatrix m = CMatrix::zero(v.n);
  m.hermitian = false;
  for (int i = 0; i < v.n; ++i) {
    for (int j = i; j < v.n; ++j) m.at(i, j) = v.at(i, j);
  }
  return m;
}

double weak_l1_probe(const CMatrix& v) {
  if (v.max_abs() == 0.0) throw ZeroMatrixError("weak_l1_probe: zero matrix");
  auto mu_t = singular_values(triangular_truncate(v));
  auto mu_v = singular_values(v);
  double s1 = std::accumulate(mu_v.begin(), mu_v.end(), 0.0);
  double ratio = 0.0;
  for (size_t k = 0; k < mu_t.size(); ++k) {
    ratio = std::max(ratio, static_cast<double>(k + 1) * mu_t[k] / s1);
  }
  return ratio;
}

// ---------------------------------------------------------------------------
// Lipschitz functions and double operator integrals
// ---------------------------------------------------------------------------

LipschitzFn LipschitzFn::make(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw BadSpecError("LipschitzFn: no knots");
  std::sort(knots.begin(), knots.end());
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i].first < knots[i + 1].first)) {
      throw BadSpecError("LipschitzFn: duplicate abscissa");
    }
  }
  for (const auto& [x, fx] : knots) {
    if (!std::isfinite(x) || !std::isfinite(fx)) {
      throw BadSpecError("LipschitzFn: non-finite knot");
    }
  }
  LipschitzFn f;
  f.knots = std::move(knots);
  return f;
}

double LipschitzFn::operator()(double x) const {
  if (knots.size() == 1) return knots.front().second;
  size_t hi = 1;
  if (x > knots[hi].first) {
    while (hi + 1 < knots.size() && x > knots[hi].first) ++hi;
  }
  const auto& [x0, f0] = knots[hi - 1];
  const auto& [x1, f1] = knots[hi];
  double slope = (f1 - f0) / (x1 - x0);
  return f0 + slope * (x - x0);  // end segments extend by their own slope
}

double LipschitzFn::lip_constant() const {
  double lip = 0.0;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    lip = std::max(lip, std::abs(knots[i + 1].second - knots[i].second) /
                            (knots[i + 1].first - knots[i].first));
  }
  return lip;
}

CMatrix function_of_hermitian(const LipschitzFn& f, const CMatrix& a) {
  Eigensystem es = hermitian_eigensystem(a);
  const int n = a.n;
  CMatrix out = CMatrix::zero(n);
  std::vector<double> fl(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) fl[static_cast<size_t>(k)] = f(es.eigenvalues[static_cast<size_t>(k)]);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      cdouble s{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        s += es.vectors.at(i, k) * fl[static_cast<size_t>(k)] *
             std::conj(es.vectors.at(j, k));
      }
      out.at(i, j) = i == j ? cdouble{s.real(), 0.0} : s;
      if (i != j) out.at(j, i) = std::conj(s);
    }
  }
  out.hermitian = true;
  return out;
}

CMatrix doi_apply(const LipschitzFn& f, const CMatrix& a, const CMatrix& v) {
  require_same_dim(a, v, "doi_apply: dimensions differ");
  Eigensystem es = hermitian_eigensystem(a);
  const int n = a.n;
  const auto& lam = es.eigenvalues;
  double diam = lam.empty() ? 0.0 : lam.back() - lam.front();
  double tol = 1e-10 * diam;
  CMatrix vt = es.vectors.adjoint() * v * es.vectors;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dl = lam[static_cast<size_t>(i)] - lam[static_cast<size_t>(j)];
      if (std::abs(dl) <= tol) {
        vt.at(i, j) = cdouble{0.0, 0.0};  // zero-diagonal convention
      } else {
        vt.at(i, j) *= (f(lam[static_cast<size_t>(i)]) - f(lam[static_cast<size_t>(j)])) / dl;
      }
    }
  }
  return es.vectors * vt * es.vectors.adjoint();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "commutator: dimensions differ");
  return a * b - b * a;
}

CommutatorIdentityReport commutator_identity_check(const LipschitzFn& f,
                                                   const CMatrix& a,
                                                   const CMatrix& b) {
  if (!a.is_hermitian() || !b.is_hermitian()) {
    throw NotHermitianError("commutator_identity_check: inputs must be hermitian");
  }
  CMatrix lhs = doi_apply(f, a, commutator(a, b));
  CMatrix rhs = commutator(function_of_hermitian(f, a), b);
  CommutatorIdentityReport rep;
  rep.deviation = (lhs - rhs).max_abs();
  rep.scale = (1.0 + f.lip_constant()) * (1.0 + a.frobenius()) *
              (1.0 + b.frobenius());
  rep.ok = rep.deviation <= 1e-10 * rep.scale;
  return rep;
}

// ---------------------------------------------------------------------------
// corpus probes
// ---------------------------------------------------------------------------

TruncationProbeResult truncation_range_probe(const std::vector<CMatrix>& corpus,
                                             const concave::ConcaveFn& phi,
                                             const concave::ConcaveFn& psi,
                                             int threads) {
  if (corpus.empty()) throw BadSpecError("truncation_range_probe: empty corpus");
  TruncationProbeResult res;
  res.norm_ratios.assign(corpus.size(), 0.0);
  res.pointwise_ratios.assign(corpus.size(), 0.0);
  parallel_for(
      corpus.size(),
      [&](size_t i) {
        const CMatrix& v = corpus[i];
        rearrangement::Seq mu_v, mu_t;
        mu_v.entries = singular_values(v);
        mu_t.entries = singular_values(triangular_truncate(v));
        double den = rearrangement::lorentz_seq_norm(mu_v, phi);
        double num = rearrangement::lorentz_seq_norm(mu_t, psi);
        res.norm_ratios[i] = den > 0.0 ? num / den : 0.0;
        rearrangement::Seq img =
            calderon::apply_discrete_calderon(mu_v, v.n - 1);
        double pw = 0.0;
        for (size_t k = 0; k < mu_t.entries.size(); ++k) {
          if (img.entries[k] > 0.0) {
            pw = std::max(pw, mu_t.entries[k] / img.entries[k]);
          }
        }
        res.pointwise_ratios[i] = pw;
      },
      threads);
  res.max_norm_ratio =
      *std::max_element(res.norm_ratios.begin(), res.norm_ratios.end());
  res.max_pointwise_ratio = *std::max_element(res.pointwise_ratios.begin(),
                                              res.pointwise_ratios.end());
  return res;
}

LipschitzProbeResult lipschitz_probe(const LipschitzFn& f, const CMatrix& x,
                                     const CMatrix& y,
                                     const concave::ConcaveFn& phi,
                                     const concave::ConcaveFn& psi) {
  require_same_dim(x, y, "lipschitz_probe: dimensions differ");
  if (!x.is_hermitian() || !y.is_hermitian()) {
    throw NotHermitianError("lipschitz_probe: inputs must be hermitian");
  }
  CMatrix d = x - y;
  if (d.max_abs() == 0.0) throw ZeroDifferenceError("lipschitz_probe: X = Y");
  double lip = f.lip_constant();
  auto ratio_of = [&](const CMatrix& num_m, const CMatrix& den_m) {
    rearrangement::Seq num_s, den_s;
    num_s.entries = singular_values(num_m);
    den_s.entries = singular_values(den_m);
    double den = lip * rearrangement::lorentz_seq_norm(den_s, phi);
    return den > 0.0 ? rearrangement::lorentz_seq_norm(num_s, psi) / den : 0.0;
  };
  LipschitzProbeResult res;
  res.ratio = ratio_of(function_of_hermitian(f, x) - function_of_hermitian(f, y), d);

  // block route: A = diag(X, Y), B swaps the two halves; [A,B] carries X - Y
  // in its corners and [f(A), B] carries f(X) - f(Y)
  const int n = x.n;
  CMatrix a = CMatrix::zero(2 * n);
  CMatrix b = CMatrix::zero(2 * n);
  for (int i = 0; i < n; ++i) {
    b.at(i, n + i) = 1.0;
    b.at(n + i, i) = 1.0;
    for (int j = 0; j < n; ++j) {
      a.at(i, j) = x.at(i, j);
      a.at(n + i, n + j) = y.at(i, j);
    }
  }
  a.hermitian = true;
  b.hermitian = true;
  res.block_ratio = ratio_of(commutator(function_of_hermitian(f, a), b),
                             commutator(a, b));
  return res;
}

}  // namespace lorentzlab::spectral
