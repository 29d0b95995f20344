#pragma once

#include <string>
#include <vector>

#include "lorentzlab/concave.hpp"
#include "lorentzlab/rearrangement.hpp"
#include "lorentzlab/report.hpp"

namespace lorentzlab::range {

// ---------------------------------------------------------------------------
// The induced range weight psi(u) = inf_{w>1} phi(u*w) / (1 + log w): the
// fundamental function of the smallest Lorentz space containing the images
// S(Lambda_phi).
// ---------------------------------------------------------------------------

struct PsiPoint {
  double value;
  double w_star;  // minimizing dilation; may sit at a search boundary
};

// Global 2048-point geometric grid search over w in (1, e^200], then 60
// golden-section refinements around the best bracket. The objective need not
// be unimodal for arbitrary concave phi, hence grid-first.
PsiPoint psi_from_phi(const concave::ConcaveFn& phi, double u);

struct PsiTable {
  concave::ConcaveFn phi;
  std::vector<double> u_grid;
  std::vector<double> psi_values;
  std::vector<double> minimizer_w;
  concave::ConcaveFn fn;  // piecewise-linear psi over the grid
  bool repaired = false;  // true if grid noise forced a concave-majorant pass
};

PsiTable build_psi_table(const concave::ConcaveFn& phi, double u_lo,
                         double u_hi, int points_per_decade, int threads = 0);

// [1e-15, 1e9] at 48 points/decade: wide enough that table-edge effects stay
// below the 1e-3 tolerances of the criterion constants.
PsiTable default_psi_table(const concave::ConcaveFn& phi, int threads = 0);

struct PsiLimitReport {
  std::vector<double> u;       // 1e-2, 1e-4, ..., 1e-12
  std::vector<double> values;  // log(1/u) * psi(u)
  bool tail_decreasing = false;
  double final_over_initial = 0.0;
  bool passed = false;  // tail decreasing and final < 0.05 * initial
};

// Probes lim_{u->0} log(1/u) * psi(u) = 0, a necessary condition for the
// range space to sit inside (L1+Linf) territory. Thresholds are our choice;
// the underlying statement gives no rate.
PsiLimitReport psi_limit_check(const concave::ConcaveFn& phi);

// ---------------------------------------------------------------------------
// The norm of the image of an indicator, G(u) = ||S chi_(0,u)||_{Lambda_psi}
//   = integral_0^u psi(t)/t dt  +  u * integral_u^inf psi(t)/t^2 dt,
// in closed form for the built-in families; exact per-segment sums for
// piecewise-linear psi with a fitted power tail beyond the last knot.
// ---------------------------------------------------------------------------

// Power-law model psi ~ coeff * t^alpha used past the last knot of a
// piecewise-linear psi (fitted over the knots of its last two decades).
// Divergent when alpha >= 0.999. For closed-form families the model is the
// family itself (from_fit = false, residual 0).
struct TailModel {
  bool from_fit = false;
  double alpha = 0.0;
  double coeff = 0.0;
  double residual = 0.0;  // max |log v - fit| over fitted knots
  bool divergent = false;
};

TailModel tail_model(const concave::ConcaveFn& psi);

// psi evaluated with the tail model in force beyond the last knot (identical
// to psi(t) for closed-form families and below the last knot).
double model_eval(const concave::ConcaveFn& psi, double t);
double model_derivative(const concave::ConcaveFn& psi, double t);

double image_head_integral(const concave::ConcaveFn& psi, double u);
// Throws TailDivergentError when the integral does not converge.
double image_tail_integral(const concave::ConcaveFn& psi, double u);
double indicator_image_norm(const concave::ConcaveFn& psi, double u);

// ---------------------------------------------------------------------------
// Boundedness criteria: S maps Lambda_phi into Lambda_psi with constant c
// iff G_psi(u) <= c * phi(u) for all u. Continuous and discrete versions.
// ---------------------------------------------------------------------------

enum class Verdict { BoundedWithC, TailDivergent, RatioUnboundedTrend };
std::string to_string(Verdict v);

struct CriterionReport {
  std::vector<double> u_grid;
  std::vector<double> g_values;
  std::vector<double> phi_values;
  std::vector<double> ratios;  // g / phi
  double c_estimate = 0.0;     // max ratio
  Verdict verdict = Verdict::BoundedWithC;
  std::string note;
};

// Ratios G_psi(u)/phi(u) over the grid (geometric, >= 8 decades). Tail
// divergence is caught into the verdict so sweeps always complete. The
// unbounded-trend flag compares the last two probed decades (heuristic,
// labeled in the note).
CriterionReport criterion_continuous(const concave::ConcaveFn& phi,
                                     const concave::ConcaveFn& psi,
                                     const std::vector<double>& u_grid);

// Sequence-space criterion: for n = 1..n_max compares
//   (1/(n+1)) sum_{k<=n} phi(k)/k + sum_{k>n} phi(k)/k^2
// against phi(n)/n. Head sums exact; the infinite tail is summed exactly to
// max(4*n_max, 262144) and completed with the midpoint integral remainder.
// A divergent tail (e.g. linear phi) yields truncated-sum ratios and the
// RatioUnboundedTrend verdict.
CriterionReport criterion_discrete(const concave::ConcaveFn& phi, int n_max);

// ---------------------------------------------------------------------------
// Witness constructions: explicit y whose image dominates a target, with
// controlled norm — the converse direction of the criteria.
// ---------------------------------------------------------------------------

struct IndicatorWitness {
  rearrangement::DecreasingStep y;  // chi_(0, u*w) / (1 + log w)
  double w_used = 1.0;
  double norm_phi = 0.0;  // ||y||_{Lambda_phi}
  double psi_u = 0.0;
  double min_slack = 0.0;  // min over (0,u] grid of Sy(t) - 1
  bool domination_ok = false;
  bool norm_ok = false;  // norm_phi <= 2 * psi_u
};

IndicatorWitness witness_indicator(const concave::ConcaveFn& phi, double u);

struct GeneralWitness {
  rearrangement::DecreasingStep y;
  double norm_y_phi = 0.0;
  double norm_x_psi = 0.0;  // sum over layers of alpha * psi(u), psi pointwise
  double ratio = 0.0;       // norm_y_phi / norm_x_psi
  double min_slack = 0.0;   // min over grid of Smu(y)(t) - mu(x)(t)
  bool domination_ok = false;
  bool factor8_ok = false;
};

// Dyadic assembly: level sets of x at heights 2^n are covered by indicator
// witnesses, weighted 2^{n+1}; the constant lower tail (all levels below the
// smallest value of x share the full support) is summed exactly as one
// geometric term. Guarantees mu(x) <= S mu(y) and ||y||_phi <= 8 ||x||_psi.
GeneralWitness witness_general(const rearrangement::DecreasingStep& x,
                               const concave::ConcaveFn& phi);

// Max over the corpus of ||S x||_{Lambda_psi} / ||x||_{Lambda_phi}; requires
// the continuous criterion to hold and asserts the max stays within twice
// its constant (the indicator-sufficiency factor).
report::ExperimentReport boundedness_probe(
    const concave::ConcaveFn& phi, const concave::ConcaveFn& psi,
    const std::vector<rearrangement::DecreasingStep>& corpus);

struct SandwichReport {
  double image_norm = 0.0;         // ||S mu(x)||_{L1+Linf}
  double lorentz_phi0_norm = 0.0;  // ||x||_{Lambda_phi0}
  bool passed = false;             // image <= lorentz <= 2 * image (1e-9 rel)
};

// The defining equivalence of the weight phi0: t*log(e^2/t) / 2*log(et).
SandwichReport phi0_sandwich_check(const rearrangement::DecreasingStep& x);

}  // namespace lorentzlab::range
