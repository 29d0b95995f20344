#pragma once

#include <complex>
#include <vector>

#include "lorentzlab/concave.hpp"

namespace lorentzlab::spectral {

using cdouble = std::complex<double>;

// Dense square complex matrix, row-major. Inputs are immutable; every
// operation returns a fresh matrix.
struct CMatrix {
  int n = 0;
  std::vector<cdouble> data;  // n*n, row-major
  bool hermitian = false;     // advisory flag; is_hermitian() checks numerically

  static CMatrix zero(int n);
  static CMatrix identity(int n);
  static CMatrix from_rows(const std::vector<std::vector<cdouble>>& rows);

  cdouble& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
  const cdouble& at(int i, int j) const {
    return data[static_cast<size_t>(i) * n + j];
  }

  bool is_hermitian(double tol = 1e-12) const;  // tol scales with max_abs
  double frobenius() const;
  double max_abs() const;
  CMatrix adjoint() const;
};

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cdouble s, const CMatrix& a);

// Singular values, nonincreasing. One-sided Jacobi: orthogonalizes column
// pairs until a full sweep makes no rotation (threshold 1e-13 relative to
// the column norms); 64-sweep cap throws ConvergenceError. Per-value
// accuracy 1e-10 * ||V||.
std::vector<double> singular_values(const CMatrix& v);

struct Eigensystem {
  std::vector<double> eigenvalues;  // ascending
  CMatrix vectors;                  // unitary, columns are eigenvectors
};

// Cyclic two-sided Jacobi for hermitian input (NotHermitianError otherwise).
Eigensystem hermitian_eigensystem(const CMatrix& a);

// sum_n mu(n, V) * (phi(n+1) - phi(n)) over the singular values of V.
double schatten_lorentz_norm(const CMatrix& v, const concave::ConcaveFn& phi);

// Entrywise mask sgn(i - j): strictly lower triangle kept, strictly upper
// negated, diagonal zeroed.
CMatrix triangular_truncate(const CMatrix& v);

// The classical triangle projection (upper triangle including the diagonal),
// kept alongside the signed mask for comparison.
CMatrix upper_triangle_project(const CMatrix& v);

// sup_n (n+1) * mu(n, T(V)) / ||V||_{S1}. Throws ZeroMatrixError on V = 0.
double weak_l1_probe(const CMatrix& v);

// Real piecewise-linear function on the line, extended by its end slopes.
struct LipschitzFn {
  std::vector<std::pair<double, double>> knots;  // (x, f(x)), x ascending

  static LipschitzFn make(std::vector<std::pair<double, double>> knots);
  double operator()(double x) const;
  double lip_constant() const;  // max |chord slope|
};

// U f(diag lambda) U*; output hermitized. NotHermitianError if A is not.
CMatrix function_of_hermitian(const LipschitzFn& f, const CMatrix& a);

// Schur multiplier of divided differences in A's eigenbasis:
//   output = U (M . (U* V U)) U*,  M_ij = (f(l_i)-f(l_j))/(l_i-l_j),
// with M_ij = 0 when |l_i - l_j| <= 1e-10 * spectral diameter (the
// zero-diagonal convention; exact for commutator-shaped V, documented
// elsewhere for general V).
CMatrix doi_apply(const LipschitzFn& f, const CMatrix& a, const CMatrix& v);

// AB - BA. DimensionMismatchError when sizes differ.
CMatrix commutator(const CMatrix& a, const CMatrix& b);

struct CommutatorIdentityReport {
  double deviation = 0.0;  // max |entry| of doi(f,A,[A,B]) - [f(A),B]
  double scale = 0.0;      // (1+lip)(1+||A||_F)(1+||B||_F)
  bool ok = false;         // deviation <= 1e-10 * scale
};

// The exact identity doi_apply(f, A, [A,B]) = [f(A), B]; repeated eigenvalues
// are harmless because [A,B] vanishes on those entries in A's eigenbasis.
CommutatorIdentityReport commutator_identity_check(const LipschitzFn& f,
                                                   const CMatrix& a,
                                                   const CMatrix& b);

struct TruncationProbeResult {
  std::vector<double> norm_ratios;       // ||T(V)||_psi / ||V||_phi per sample
  std::vector<double> pointwise_ratios;  // max_n mu(n,T(V)) / (S^d mu(V))(n)
  double max_norm_ratio = 0.0;
  double max_pointwise_ratio = 0.0;
};

// Empirical range probe for the truncation: Lorentz-norm ratios and the
// pointwise domination of mu(T(V)) by the discrete Calderon image of mu(V).
TruncationProbeResult truncation_range_probe(const std::vector<CMatrix>& corpus,
                                             const concave::ConcaveFn& phi,
                                             const concave::ConcaveFn& psi,
                                             int threads = 0);

struct LipschitzProbeResult {
  double ratio = 0.0;        // ||f(X)-f(Y)||_psi / (lip * ||X-Y||_phi)
  double block_ratio = 0.0;  // same data routed through the 2n-block commutator
};

// Operator-Lipschitz ratio for one pair, plus the block-commutator route
// A = diag(X, Y), B = the symmetric swap (recorded for comparison, not
// asserted: the block spectrum doubles every multiplicity, shifting the
// Lorentz weights). Throws ZeroDifferenceError when X = Y.
LipschitzProbeResult lipschitz_probe(const LipschitzFn& f, const CMatrix& x,
                                     const CMatrix& y,
                                     const concave::ConcaveFn& phi,
                                     const concave::ConcaveFn& psi);

}  // namespace lorentzlab::spectral
