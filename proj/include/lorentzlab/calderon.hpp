#pragma once

#include <utility>
#include <vector>

#include "lorentzlab/concave.hpp"
#include "lorentzlab/rearrangement.hpp"

namespace lorentzlab::calderon {

// Exact symbolic image of a layer-cake step under the averaging operator
//   (S x)(t) = (1/t) * integral_0^t x + integral_t^inf x(s)/s ds.
// For the indicator of (0,u) the image is
//   s_u(t) = 1 + log(u/t)  (t < u),   u/t  (t >= u),
// so images of steps stay evaluable in closed form and are never sampled
// back into steps. The image is continuous, nonincreasing, and equals its
// own decreasing rearrangement.
struct CalderonImage {
  std::vector<std::pair<double, double>> layers;  // (alpha_k, u_k), u ascending

  double operator()(double t) const;
  bool is_zero() const { return layers.empty(); }
  // sum alpha_k * u_k: the coefficient of the 1/t far tail
  double tail_mass() const;
  // sum alpha_k: the coefficient of log(1/t) near zero
  double head_slope() const;
};

CalderonImage apply_calderon(const rearrangement::DecreasingStep& mu);

// S applied to a signed step, evaluated exactly at one point (both the mean
// term and the harmonic tail are finite sums).
double calderon_of_step(const rearrangement::StepFn& x, double t);

// Discrete analogue on sequences: entry n of the result is
//   (1/(n+1)) * sum_{k<=n} a(k)  +  sum_{k>n} a(k)/k.
rearrangement::Seq apply_discrete_calderon(const rearrangement::Seq& a,
                                           int n_max);

// Principal-value Hilbert transform of a step, in closed form:
//   (1/pi) * sum_k v_k log(|t - t_{k-1}| / |t - t_k|).
// Throws AtSingularityError within 1e-12 * scale of a breakpoint (including
// the implicit one at 0); no regularized value is invented there.
double hilbert_of_step(const rearrangement::StepFn& x, double t);

struct DominationReport {
  bool passed = true;
  double min_slack = 0.0;  // min over the grid of |Hx(-t)| - Smu(t)/(2*pi)
  double argmin_t = 0.0;
};

// Checks |H(mu)(-t)| >= (1/(2*pi)) * (S mu)(t) - 1e-12 over the grid.
DominationReport check_hilbert_domination(
    const rearrangement::DecreasingStep& mu, const std::vector<double>& t_grid);

struct RearrangementEstimate {
  std::vector<double> values;  // |Hx| samples, sorted nonincreasing
  double cell_width = 0.0;     // values[k] estimates mu(Hx) near (k+1)*cell
};

// Samples |Hx| on a uniform grid over [-window, window] (skipping breakpoint
// neighborhoods) and sorts. An under-estimate of the decreasing rearrangement
// of Hx: the logarithmic spikes at breakpoints are truncated by the grid.
RearrangementEstimate hilbert_rearrangement_estimate(
    const rearrangement::StepFn& x, int n_samples, double window);

// (L1+L-inf) norm of an image, exact:
// integral_0^1 s_u = u*(2 - log u) for u <= 1, and 2 + log u for u >= 1.
double l1_linf_norm(const CalderonImage& img);

// Lorentz functional of an image: sum alpha_k * ||S chi_(0,u_k)||, each term
// by the integration-by-parts closed form (optimal_range supplies it). With
// cross_check, a direct Stieltjes quadrature of integral img d(psi) on a
// 1e4-cell geometric grid must agree within 1e-6 relative, else
// ConvergenceError. Throws TailDivergentError when the tail integral of psi
// does not converge.
double image_lorentz_norm(const CalderonImage& img,
                          const concave::ConcaveFn& psi,
                          bool cross_check = true);

// The Stieltjes-quadrature side of the cross-check, exposed for tests.
double image_lorentz_norm_oracle(const CalderonImage& img,
                                 const concave::ConcaveFn& psi);

}  // namespace lorentzlab::calderon
