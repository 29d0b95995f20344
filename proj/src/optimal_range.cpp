#include "lorentzlab/optimal_range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lorentzlab/calderon.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/parallel.hpp"
#include "lorentzlab/quadrature.hpp"

namespace lorentzlab::range {

using concave::ConcaveFn;

// ---------------------------------------------------------------------------
// psi(u) = inf_{w>1} phi(u*w)/(1+log w)
// ---------------------------------------------------------------------------

PsiPoint psi_from_phi(const ConcaveFn& phi, double u) {
  if (!(u > 0.0)) throw BadSpecError("psi_from_phi: u must be positive");
  // work in lw = log w on [0, 200]; the w = 1 endpoint carries the limit
  // value phi(u), which closes the infimum over the open set w > 1
  auto obj = [&](double lw) { return phi(u * std::exp(lw)) / (1.0 + lw); };
  const int grid_n = 2048;
  const double lw_hi = 200.0;
  double best_lw = 0.0;
  double best_val = obj(0.0);
  for (int j = 1; j <= grid_n; ++j) {
    double lw = lw_hi * j / grid_n;
    double v = obj(lw);
    if (v < best_val) {
      best_val = v;
      best_lw = lw;
    }
  }
  double step = lw_hi / grid_n;
  double a = std::max(0.0, best_lw - step);
  double b = std::min(lw_hi, best_lw + step);
  const double invphi = 0.61803398874989484820;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = obj(c), fd = obj(d);
  auto consider = [&](double lw, double v) {
    if (v < best_val) {
      best_val = v;
      best_lw = lw;
    }
  };
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = obj(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = obj(d);
      consider(d, fd);
    }
  }
  return PsiPoint{best_val, std::exp(best_lw)};
}

PsiTable build_psi_table(const ConcaveFn& phi, double u_lo, double u_hi,
                         int points_per_decade, int threads) {
  if (!(u_lo > 0.0) || !(u_hi > u_lo) || points_per_decade < 1) {
    throw BadSpecError("build_psi_table: bad grid request");
  }
  int points =
      static_cast<int>(std::lround(points_per_decade *
                                   std::log10(u_hi / u_lo))) + 1;
  PsiTable tab{phi, concave::geometric_grid(u_lo, u_hi, points),
               {}, {}, ConcaveFn::log1p(), false};
  tab.psi_values.resize(tab.u_grid.size());
  tab.minimizer_w.resize(tab.u_grid.size());
  parallel_for(
      tab.u_grid.size(),
      [&](size_t i) {
        PsiPoint p = psi_from_phi(phi, tab.u_grid[i]);
        tab.psi_values[i] = p.value;
        tab.minimizer_w[i] = p.w_star;
      },
      threads);
  std::vector<concave::Knot> knots;
  knots.reserve(tab.u_grid.size());
  for (size_t i = 0; i < tab.u_grid.size(); ++i) {
    knots.push_back({tab.u_grid[i], tab.psi_values[i]});
  }
  ConcaveFn raw = ConcaveFn::piecewise_linear(knots);
  auto diag = concave::check_concave_increasing(raw, tab.u_grid);
  if (diag.concave) {
    tab.fn = std::move(raw);
  } else {
    // solver noise broke concavity on the grid; project back up
    tab.fn = concave::least_concave_majorant(knots);
    tab.repaired = true;
  }
  return tab;
}

PsiTable default_psi_table(const ConcaveFn& phi, int threads) {
  return build_psi_table(phi, 1e-15, 1e9, 48, threads);
}

PsiLimitReport psi_limit_check(const ConcaveFn& phi) {
  PsiLimitReport rep;
  for (int e = 2; e <= 12; e += 2) {
    double u = std::pow(10.0, -e);
    rep.u.push_back(u);
    rep.values.push_back(std::log(1.0 / u) * psi_from_phi(phi, u).value);
  }
  size_t n = rep.values.size();
  rep.tail_decreasing =
      rep.values[n - 1] <= rep.values[n - 2] * (1.0 + 1e-12) &&
      rep.values[n - 2] <= rep.values[n - 3] * (1.0 + 1e-12);
  rep.final_over_initial = rep.values.back() / rep.values.front();
  rep.passed = rep.tail_decreasing && rep.final_over_initial < 0.05;
  return rep;
}

// ---------------------------------------------------------------------------
// G(u) = integral_0^u psi/t + u * integral_u^inf psi/t^2
// ---------------------------------------------------------------------------

TailModel tail_model(const ConcaveFn& psi) {
  TailModel m;
  switch (psi.kind()) {
    case ConcaveFn::Kind::Power:
      m.alpha = psi.alpha();
      m.coeff = 1.0;
      m.divergent = psi.alpha() >= 1.0 - 1e-12;
      return m;
    case ConcaveFn::Kind::Log1p:
    case ConcaveFn::Kind::PhiZero:
      return m;  // closed forms below; never divergent
    case ConcaveFn::Kind::PiecewiseLinear:
      break;
  }
  m.from_fit = true;
  const auto& knots = psi.knots();
  double t_end = knots.back().t;
  std::vector<std::pair<double, double>> pts;  // (log t, log v)
  for (const auto& k : knots) {
    if (k.t >= t_end * 1e-2 && k.v > 0.0 && k.t > 0.0) {
      pts.emplace_back(std::log(k.t), std::log(k.v));
    }
  }
  if (pts.size() < 2) {
    if (psi.final_slope() == 0.0) {
      m.alpha = 0.0;
      m.coeff = knots.back().v;
      return m;
    }
    m.divergent = true;
    return m;
  }
  double mt = 0.0, mv = 0.0;
  for (const auto& [lt, lv] : pts) {
    mt += lt;
    mv += lv;
  }
  mt /= static_cast<double>(pts.size());
  mv /= static_cast<double>(pts.size());
  double cov = 0.0, var = 0.0;
  for (const auto& [lt, lv] : pts) {
    cov += (lt - mt) * (lv - mv);
    var += (lt - mt) * (lt - mt);
  }
  m.alpha = var > 0.0 ? std::max(0.0, cov / var) : 0.0;
  double log_c = mv - m.alpha * mt;
  m.coeff = std::exp(log_c);
  for (const auto& [lt, lv] : pts) {
    m.residual = std::max(m.residual, std::abs(lv - (log_c + m.alpha * lt)));
  }
  m.divergent = m.alpha >= 0.999;
  return m;
}

double model_eval(const ConcaveFn& psi, double t) {
  if (psi.kind() != ConcaveFn::Kind::PiecewiseLinear ||
      t <= psi.knots().back().t) {
    return psi(t);
  }
  TailModel m = tail_model(psi);
  if (m.divergent) return psi(t);  // harmless: tail integrals reject first
  return m.coeff * std::pow(t, m.alpha);
}

double model_derivative(const ConcaveFn& psi, double t) {
  if (!(t > 0.0)) throw BadSpecError("model_derivative: needs t > 0");
  switch (psi.kind()) {
    case ConcaveFn::Kind::Power:
      return psi.alpha() * std::pow(t, psi.alpha() - 1.0);
    case ConcaveFn::Kind::Log1p:
      return 1.0 / (1.0 + t);
    case ConcaveFn::Kind::PhiZero:
      return t < 1.0 ? 1.0 - std::log(t) : 2.0 / t;
    case ConcaveFn::Kind::PiecewiseLinear:
      break;
  }
  const auto& k = psi.knots();
  if (t > k.back().t) {
    TailModel m = tail_model(psi);
    if (m.divergent) return psi.final_slope();
    return m.alpha > 0.0 ? m.coeff * m.alpha * std::pow(t, m.alpha - 1.0) : 0.0;
  }
  auto it = std::upper_bound(
      k.begin(), k.end(), t,
      [](double x, const concave::Knot& kn) { return x < kn.t; });
  if (it == k.begin()) ++it;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return (hi.v - lo.v) / (hi.t - lo.t);
}

namespace {

// integral over [a, b] of (c + m*t)/t dt and /t^2 dt, for one linear segment
double seg_over_t(double c, double m, double a, double b) {
  return c * std::log(b / a) + m * (b - a);
}
double seg_over_t2(double c, double m, double a, double b) {
  return c * (1.0 / a - 1.0 / b) + m * std::log(b / a);
}

double log1p_head(double u) {
  // integral_0^u log(1+t)/t dt; the integrand extends continuously to 1 at 0
  auto f = [](double t) { return std::log1p(t) / t; };
  if (u <= 1.0) return quad::gl16_uniform(f, 0.0, u, 8);
  return quad::gl16_uniform(f, 0.0, 1.0, 8) + quad::gl16_geometric(f, 1.0, u, 8);
}

}  // namespace

double image_head_integral(const ConcaveFn& psi, double u) {
  if (!(u > 0.0)) throw BadSpecError("image_head_integral: u must be positive");
  switch (psi.kind()) {
    case ConcaveFn::Kind::Power:
      return std::pow(u, psi.alpha()) / psi.alpha();
    case ConcaveFn::Kind::Log1p:
      return log1p_head(u);
    case ConcaveFn::Kind::PhiZero:
      // integral of (2 - log t) below 1 and 2(1+log t)/t above
      if (u <= 1.0) return u * (3.0 - std::log(u));
      return 3.0 + 2.0 * std::log(u) + std::log(u) * std::log(u);
    case ConcaveFn::Kind::PiecewiseLinear:
      break;
  }
  const auto& k = psi.knots();
  double acc = 0.0;
  for (size_t i = 0; i + 1 < k.size(); ++i) {
    double a = k[i].t, b = k[i + 1].t;
    if (a >= u) return acc;
    double m = (k[i + 1].v - k[i].v) / (b - a);
    double c = k[i].v - m * a;
    double hi = std::min(b, u);
    if (a == 0.0) {
      // first segment passes through the origin: c vanishes identically
      acc += m * hi;
    } else {
      acc += seg_over_t(c, m, a, hi);
    }
    if (hi == u) return acc;
  }
  // beyond the last knot: fitted power tail
  TailModel tm = tail_model(psi);
  double t_end = k.back().t;
  if (tm.divergent) {
    // the head integral still converges for the linear extension
    double m = psi.final_slope();
    double c = k.back().v - m * t_end;
    return acc + seg_over_t(c, m, t_end, u);
  }
  if (tm.alpha < 1e-12) return acc + tm.coeff * std::log(u / t_end);
  return acc + tm.coeff * (std::pow(u, tm.alpha) - std::pow(t_end, tm.alpha)) /
                   tm.alpha;
}

double image_tail_integral(const ConcaveFn& psi, double u) {
  if (!(u > 0.0)) throw BadSpecError("image_tail_integral: u must be positive");
  switch (psi.kind()) {
    case ConcaveFn::Kind::Power: {
      double alpha = psi.alpha();
      if (alpha >= 1.0 - 1e-12) {
        throw TailDivergentError(
            "image_tail_integral: t^(alpha-2) has a divergent tail at alpha=1");
      }
      return std::pow(u, alpha - 1.0) / (1.0 - alpha);
    }
    case ConcaveFn::Kind::Log1p:
      return std::log1p(u) / u + std::log1p(1.0 / u);
    case ConcaveFn::Kind::PhiZero: {
      if (u >= 1.0) return 2.0 * (2.0 + std::log(u)) / u;
      double lu = std::log(u);
      return 4.0 - 2.0 * lu + 0.5 * lu * lu;
    }
    case ConcaveFn::Kind::PiecewiseLinear:
      break;
  }
  TailModel tm = tail_model(psi);
  if (tm.divergent) {
    throw TailDivergentError(
        "image_tail_integral: piecewise-linear tail grows too fast "
        "(fitted exponent >= 0.999)");
  }
  const auto& k = psi.knots();
  double t_end = k.back().t;
  if (u >= t_end) {
    return tm.coeff * std::pow(u, tm.alpha - 1.0) / (1.0 - tm.alpha);
  }
  double acc = tm.coeff * std::pow(t_end, tm.alpha - 1.0) / (1.0 - tm.alpha);
  for (size_t i = k.size() - 1; i-- > 0;) {
    double a = k[i].t, b = k[i + 1].t;
    if (b <= u) break;
    double m = (k[i + 1].v - k[i].v) / (b - a);
    double c = k[i].v - m * a;
    double lo = std::max(a, u);
    if (lo == 0.0) break;  // cannot happen: u > 0 caps the lower end
    acc += seg_over_t2(c, m, lo, b);
    if (lo == u) break;
  }
  return acc;
}

double indicator_image_norm(const ConcaveFn& psi, double u) {
  return image_head_integral(psi, u) + u * image_tail_integral(psi, u);
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundedWithC:
      return "bounded_with_c";
    case Verdict::TailDivergent:
      return "tail_divergent";
    case Verdict::RatioUnboundedTrend:
      return "ratio_unbounded_trend";
  }
  return "unknown";
}

namespace {

// heuristic trend flag: compare the max ratio over the last probed decade
// with the decade before it
bool unbounded_trend(const std::vector<double>& grid,
                     const std::vector<double>& ratios) {
  if (grid.size() < 3) return false;
  double hi = grid.back();
  double last = 0.0, prev = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= hi * 1e-1) {
      last = std::max(last, ratios[i]);
    } else if (grid[i] >= hi * 1e-2) {
      prev = std::max(prev, ratios[i]);
    }
  }
  return prev > 0.0 && last > prev * 1.05;
}

}  // namespace

CriterionReport criterion_continuous(const ConcaveFn& phi, const ConcaveFn& psi,
                                     const std::vector<double>& u_grid) {
  CriterionReport rep;
  rep.u_grid = u_grid;
  try {
    for (double u : u_grid) {
      double g = indicator_image_norm(psi, u);
      double p = phi(u);
      rep.g_values.push_back(g);
      rep.phi_values.push_back(p);
      rep.ratios.push_back(g / p);
    }
  } catch (const TailDivergentError&) {
    rep.verdict = Verdict::TailDivergent;
    rep.note = "tail integral of psi/t^2 diverges; no finite constant exists";
    rep.g_values.clear();
    rep.phi_values.clear();
    rep.ratios.clear();
    return rep;
  }
  rep.c_estimate = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  if (unbounded_trend(rep.u_grid, rep.ratios)) {
    rep.verdict = Verdict::RatioUnboundedTrend;
    rep.note =
        "ratio still climbing over the last two probed decades "
        "(heuristic trend flag)";
  } else {
    rep.note = "max of G(u)/phi(u) over the probe grid";
  }
  return rep;
}

CriterionReport criterion_discrete(const ConcaveFn& phi, int n_max) {
  if (n_max < 64) throw BadSpecError("criterion_discrete: need n_max >= 64");
  CriterionReport rep;
  const int k_sum = std::max(4 * n_max, 262144);
  std::vector<double> phik(static_cast<size_t>(k_sum) + 1, 0.0);
  for (int k = 1; k <= k_sum; ++k) {
    phik[static_cast<size_t>(k)] = phi(static_cast<double>(k));
  }
  // exact partial sums: head(n) = sum_{k<=n} phi(k)/k,
  // tail(n) = sum_{n<k<=K} phi(k)/k^2, completed by the midpoint remainder
  std::vector<double> tail(static_cast<size_t>(n_max) + 2, 0.0);
  double acc = 0.0;
  for (int k = k_sum; k > 0; --k) {
    acc += phik[static_cast<size_t>(k)] / (static_cast<double>(k) * k);
    if (k <= n_max + 1) tail[static_cast<size_t>(k)] = acc;
  }
  bool divergent_tail = false;
  double remainder = 0.0;
  try {
    remainder = image_tail_integral(phi, k_sum + 0.5);
  } catch (const TailDivergentError&) {
    divergent_tail = true;  // report truncated sums and flag the trend
  }
  double head = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    head += phik[static_cast<size_t>(n)] / n;
    double lhs = head / (n + 1) + tail[static_cast<size_t>(n) + 1] + remainder;
    double rhs = phik[static_cast<size_t>(n)] / n;
    rep.u_grid.push_back(static_cast<double>(n));
    rep.g_values.push_back(lhs);
    rep.phi_values.push_back(rhs);
    rep.ratios.push_back(lhs / rhs);
  }
  rep.c_estimate = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  if (divergent_tail) {
    rep.verdict = Verdict::RatioUnboundedTrend;
    rep.note =
        "tail sum diverges; ratios use the sum truncated at k = " +
        std::to_string(k_sum);
  } else if (unbounded_trend(rep.u_grid, rep.ratios)) {
    rep.verdict = Verdict::RatioUnboundedTrend;
    rep.note = "ratio still climbing over the last two probed decades";
  } else {
    rep.note = "ratios of the sequence-space criterion against phi(n)/n";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// witnesses
// ---------------------------------------------------------------------------

IndicatorWitness witness_indicator(const ConcaveFn& phi, double u) {
  if (!(u > 0.0)) throw BadSpecError("witness_indicator: u must be positive");
  PsiPoint p = psi_from_phi(phi, u);
  IndicatorWitness wit;
  wit.w_used = p.w_star;
  wit.psi_u = p.value;
  double coef = 1.0 / (1.0 + std::log(p.w_star));
  wit.y = rearrangement::DecreasingStep::indicator(u * p.w_star, coef);
  wit.norm_phi = rearrangement::lorentz_norm(wit.y, phi);
  calderon::CalderonImage img = calderon::apply_calderon(wit.y);
  auto grid = concave::geometric_grid(u * 1e-6, u, 64);
  wit.min_slack = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    wit.min_slack = std::min(wit.min_slack, img(t) - 1.0);
  }
  wit.domination_ok = wit.min_slack >= -1e-12;
  wit.norm_ok = wit.norm_phi <= 2.0 * wit.psi_u * (1.0 + 1e-9);
  return wit;
}

GeneralWitness witness_general(const rearrangement::DecreasingStep& x,
                               const ConcaveFn& phi) {
  GeneralWitness wit;
  if (x.is_zero()) {
    wit.domination_ok = true;
    wit.factor8_ok = true;
    return wit;
  }
  const double vmax = x.max_value();
  const double vmin = x.layers.back().first;  // value on the outermost piece
  const double supp = x.support_end();
  const int n_hi = std::ilogb(vmax);
  const int n_lo = std::ilogb(vmin);

  // x <= sum_{n <= n_hi} 2^n chi_{x >= 2^n}; each level set (0, d_n] is
  // covered by an indicator witness, weighted 2^{n+1}. Levels at or below
  // n_lo all have d_n = supp and collapse to one exact geometric total 2^(n_lo+2).
  std::vector<std::pair<double, double>> layers;
  auto add_witness_layer = [&](double weight, double d) {
    PsiPoint p = psi_from_phi(phi, d);
    layers.emplace_back(weight / (1.0 + std::log(p.w_star)), d * p.w_star);
  };
  add_witness_layer(std::ldexp(1.0, n_lo + 2), supp);
  for (int n = n_lo + 1; n <= n_hi; ++n) {
    double d = rearrangement::distribution(x, std::ldexp(1.0, n));
    if (d <= 0.0) break;  // 2^n above the top value (possible when n = n_hi)
    add_witness_layer(std::ldexp(1.0, n + 1), d);
  }
  wit.y = rearrangement::DecreasingStep::make(std::move(layers));
  wit.norm_y_phi = rearrangement::lorentz_norm(wit.y, phi);
  wit.norm_x_psi = 0.0;
  for (const auto& [alpha, u] : x.layers) {
    wit.norm_x_psi += alpha * psi_from_phi(phi, u).value;
  }
  wit.ratio = wit.norm_y_phi / wit.norm_x_psi;
  wit.factor8_ok = wit.norm_y_phi <= 8.0 * wit.norm_x_psi * (1.0 + 1e-9);

  calderon::CalderonImage img = calderon::apply_calderon(wit.y);
  auto grid = concave::geometric_grid(supp * 1e-9, supp, 128);
  for (const auto& [alpha, u] : x.layers) grid.push_back(u);
  wit.min_slack = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    wit.min_slack = std::min(wit.min_slack, img(t) - x(t));
  }
  wit.domination_ok = wit.min_slack >= -1e-12 * vmax;
  return wit;
}

report::ExperimentReport boundedness_probe(
    const ConcaveFn& phi, const ConcaveFn& psi,
    const std::vector<rearrangement::DecreasingStep>& corpus) {
  auto grid = concave::geometric_grid(1e-4, 1e4, 65);
  CriterionReport crit = criterion_continuous(phi, psi, grid);
  if (crit.verdict == Verdict::TailDivergent) {
    throw TailDivergentError(
        "boundedness_probe: the continuous criterion reports a divergent tail");
  }
  std::vector<double> samples;
  samples.reserve(corpus.size());
  for (const auto& x : corpus) {
    if (x.is_zero()) {
      samples.push_back(0.0);
      continue;
    }
    double num = calderon::image_lorentz_norm(calderon::apply_calderon(x), psi);
    double den = rearrangement::lorentz_norm(x, phi);
    samples.push_back(num / den);
  }
  double max_ratio =
      samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end());
  bool pass = crit.verdict == Verdict::BoundedWithC &&
              max_ratio <= 2.0 * crit.c_estimate + 1e-6;
  std::ostringstream note;
  note << "criterion constant c = " << crit.c_estimate
       << "; corpus max must stay within the indicator-sufficiency ceiling 2c";
  return report::summarize("calderon_boundedness",
                           std::to_string(corpus.size()) + " decreasing steps",
                           std::move(samples), pass, note.str());
}

SandwichReport phi0_sandwich_check(const rearrangement::DecreasingStep& x) {
  SandwichReport rep;
  rep.image_norm = calderon::l1_linf_norm(calderon::apply_calderon(x));
  rep.lorentz_phi0_norm = rearrangement::lorentz_norm(x, ConcaveFn::phi_zero());
  rep.passed = rep.image_norm <= rep.lorentz_phi0_norm * (1.0 + 1e-9) &&
               rep.lorentz_phi0_norm <= 2.0 * rep.image_norm * (1.0 + 1e-9);
  return rep;
}

}  // namespace lorentzlab::range
