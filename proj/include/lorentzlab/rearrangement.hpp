#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lorentzlab/concave.hpp"

namespace lorentzlab::rearrangement {

// Signed simple function on (0, inf): x = v_k on (t_{k-1}, t_k] with
// t_0 = 0, zero beyond the last breakpoint. Canonical form merges adjacent
// equal values and drops trailing zero pieces; an empty StepFn is the zero
// function. Interval endpoints follow the half-open convention; no computed
// quantity depends on measure-zero choices.
struct StepFn {
  std::vector<double> breakpoints;  // 0 < t_1 < ... < t_n
  std::vector<double> values;       // v_1 .. v_n, signed

  static StepFn make(std::vector<double> breakpoints,
                     std::vector<double> values);
  static StepFn zero() { return StepFn{}; }

  double operator()(double t) const;
  bool is_zero() const { return breakpoints.empty(); }
  double support_end() const {
    return breakpoints.empty() ? 0.0 : breakpoints.back();
  }
};

// Nonincreasing step function in layer-cake form: sum_k alpha_k chi_(0,u_k]
// with alpha_k > 0 and u_1 < u_2 < ... strictly. The natural carrier for
// decreasing rearrangements.
struct DecreasingStep {
  std::vector<std::pair<double, double>> layers;  // (alpha_k, u_k)

  static DecreasingStep make(std::vector<std::pair<double, double>> layers);
  static DecreasingStep indicator(double u, double height = 1.0);
  static DecreasingStep zero() { return DecreasingStep{}; }

  // value at t > 0: sum of alpha_k over layers with u_k >= t
  double operator()(double t) const;
  bool is_zero() const { return layers.empty(); }
  double support_end() const { return layers.empty() ? 0.0 : layers.back().second; }
  double max_value() const;       // value on the first piece
  double total_integral() const;  // sum alpha_k * u_k
  StepFn to_step_fn() const;
};

// Finite union of disjoint intervals (a_i, b_i) in (0, inf), sorted.
struct IntervalSet {
  std::vector<std::pair<double, double>> intervals;

  static IntervalSet make(std::vector<std::pair<double, double>> intervals);
  double measure() const;
  StepFn indicator() const;
};

// Finite real sequence indexed from 0, implicitly zero beyond the stored
// entries.
struct Seq {
  std::vector<double> entries;
};

// Decreasing rearrangement of |x| in layer-cake form. Preserves the
// distribution function and the integral of |x| exactly.
DecreasingStep rearrange(const StepFn& x);

// Lebesgue measure of {|x| >= s} (closed level sets), exact.
double distribution(const StepFn& x, double s);
double distribution(const DecreasingStep& x, double s);

// Lorentz functional: integral of the decreasing step against d(phi), which
// collapses to sum_k alpha_k * phi(u_k). Exact up to phi's own arithmetic.
double lorentz_norm(const DecreasingStep& mu, const concave::ConcaveFn& phi);

// Sequence version: sort |a| nonincreasing, sum mu(n) * (phi(n+1) - phi(n)).
double lorentz_seq_norm(const Seq& a, const concave::ConcaveFn& phi);

// (L1+L-inf) norm of a nonincreasing function = integral of it over (0,1).
// Exact for DecreasingStep; the generic overload runs composite quadrature
// (relative target 1e-8) after a 64-point monotonicity spot-check and throws
// NotDecreasingError when that check fails.
double l1_linf_norm(const DecreasingStep& z);
double l1_linf_norm(const std::function<double(double)>& z);

}  // namespace lorentzlab::rearrangement
