#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lorentzlab::concave {

struct Knot {
  double t;
  double v;
};

// Increasing functions on [0, inf) with f(0) = 0, used as Lorentz-space
// weights. Three closed-form families plus a piecewise-linear interpolant:
//
//   Power(alpha)    t^alpha, 0 < alpha <= 1
//   Log1p           log(1 + t)
//   PhiZero         t*log(e^2/t) on (0,1), 2*log(e*t) on [1,inf)
//   PiecewiseLinear linear between knots, linear through the origin before
//                   the first knot, extended past the last knot with the
//                   final chord slope clamped to be nonnegative
//
// Note PhiZero is quasiconcave but not concave: its one-sided slopes at t = 1
// are 1 and 2, so chord slopes increase across the junction. The diagnostic
// below reports that honestly rather than hiding it.
class ConcaveFn {
 public:
  enum class Kind { Power, Log1p, PhiZero, PiecewiseLinear };

  static ConcaveFn power(double alpha);
  static ConcaveFn log1p();
  static ConcaveFn phi_zero();
  static ConcaveFn piecewise_linear(std::vector<Knot> knots);

  double operator()(double t) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  // Knots of a PiecewiseLinear fn; includes the implicit origin knot.
  const std::vector<Knot>& knots() const { return knots_; }
  // Slope used past the last knot (PiecewiseLinear only), already clamped.
  double final_slope() const;
  std::string describe() const;

 private:
  ConcaveFn(Kind k, double alpha, std::vector<Knot> knots)
      : kind_(k), alpha_(alpha), knots_(std::move(knots)) {}

  Kind kind_;
  double alpha_ = 0.0;
  std::vector<Knot> knots_;  // PiecewiseLinear only
};

std::vector<double> geometric_grid(double lo, double hi, int points);

// 241 geometric points on [1e-12, 1e12]. Grid suprema computed on it are
// lower bounds of the true suprema; 10 points per decade keeps that gap
// below the tolerances used in the diagnostics.
const std::vector<double>& default_probe_grid();

struct ConcavityDiagnostic {
  bool passed = true;
  bool monotone = true;
  bool concave = true;
  bool ratio_decreasing = true;  // t -> f(t)/t nonincreasing
  // t at the right end of the first offending chord / point, plus a reason.
  std::optional<std::pair<double, std::string>> first_violation;
};

// Verifies monotonicity, chord-slope monotonicity, and f(t)/t nonincreasing
// on the given sorted positive grid (>= 3 points), with relative tolerance
// 1e-9 against the local value scale.
ConcavityDiagnostic check_concave_increasing(const ConcaveFn& f,
                                             const std::vector<double>& grid);

// Least concave majorant of the given points together with the origin:
// the upper convex hull, returned as a PiecewiseLinear ConcaveFn with the
// hull vertices as knots (collinear interior points dropped, so the result
// is a fixed point of the operation). Throws EmptyInputError on no points.
ConcaveFn least_concave_majorant(const std::vector<Knot>& points);

// sup over the probe grid of f(s*t)/f(t). A grid supremum, hence a lower
// bound of the true dilation function value.
double dilation_function(const ConcaveFn& f, double s,
                         const std::vector<double>& probe_grid);
double dilation_function(const ConcaveFn& f, double s);

struct DilationIndices {
  double lower;  // log M(s) / log s at s = 2^-20
  double upper;  // log M(s) / log s at s = 2^+20
};

// Finite-s estimates of the dilation indices; both lie in [0, 1] up to grid
// error and lower <= upper (e.g. the L1+Linf weight min(t,1) gives (0, 1)).
DilationIndices dilation_indices(const ConcaveFn& f);

struct EmbeddingVerdict {
  bool holds;       // heuristic: the ratio has stabilised and is finite
  double constant;  // sup over the probe grid of log(1+t)/f(t)
};

// Probes whether log(1+t) <= c * f(t) on (0, inf), a sufficient condition
// for the weight to define a space inside the log-Lorentz space. The "holds"
// flag additionally requires the ratio to be nonincreasing over the last two
// probed decades; that stability requirement is a documented heuristic.
EmbeddingVerdict embeds_in_lambda_log(const ConcaveFn& f);

}  // namespace lorentzlab::concave
