#include "lorentzlab/concave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lorentzlab/errors.hpp"

namespace lorentzlab::concave {

ConcaveFn ConcaveFn::power(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw BadSpecError("power weight needs alpha in (0, 1], got " +
                       std::to_string(alpha));
  }
  return ConcaveFn(Kind::Power, alpha, {});
}

ConcaveFn ConcaveFn::log1p() { return ConcaveFn(Kind::Log1p, 0.0, {}); }

ConcaveFn ConcaveFn::phi_zero() { return ConcaveFn(Kind::PhiZero, 0.0, {}); }

ConcaveFn ConcaveFn::piecewise_linear(std::vector<Knot> knots) {
  if (knots.empty()) throw EmptyInputError("piecewise_linear: no knots");
  for (size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i].t >= 0.0) || !std::isfinite(knots[i].t) ||
        !(knots[i].v >= 0.0) || !std::isfinite(knots[i].v)) {
      throw BadSpecError("piecewise_linear: knots must be finite and >= 0");
    }
    if (i > 0 && !(knots[i].t > knots[i - 1].t)) {
      throw NotDecreasingError(
          "piecewise_linear: knot abscissae must be strictly increasing");
    }
  }
  if (knots.front().t == 0.0) {
    if (knots.front().v != 0.0) {
      throw BadSpecError("piecewise_linear: a knot at t = 0 must have v = 0");
    }
  } else {
    // implicit origin: linear from (0,0) to the first knot
    knots.insert(knots.begin(), Knot{0.0, 0.0});
  }
  if (knots.size() < 2) {
    throw BadSpecError("piecewise_linear: need at least one knot with t > 0");
  }
  return ConcaveFn(Kind::PiecewiseLinear, 0.0, std::move(knots));
}

double ConcaveFn::final_slope() const {
  if (kind_ != Kind::PiecewiseLinear) {
    throw BadSpecError("final_slope: only defined for piecewise-linear fns");
  }
  const Knot& a = knots_[knots_.size() - 2];
  const Knot& b = knots_.back();
  return std::max(0.0, (b.v - a.v) / (b.t - a.t));
}

double ConcaveFn::operator()(double t) const {
  if (!(t >= 0.0)) throw BadSpecError("weight evaluated at negative t");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power:
      return std::pow(t, alpha_);
    case Kind::Log1p:
      return std::log1p(t);
    case Kind::PhiZero:
      // t*(2 - log t) on (0,1); continuous join with 2*(1 + log t) at t = 1.
      return t < 1.0 ? t * (2.0 - std::log(t)) : 2.0 * (1.0 + std::log(t));
    case Kind::PiecewiseLinear: {
      const auto& k = knots_;
      if (t >= k.back().t) {
        return k.back().v + final_slope() * (t - k.back().t);
      }
      // first knot with knot.t > t; predecessor exists since k[0].t == 0
      auto it = std::upper_bound(
          k.begin(), k.end(), t,
          [](double x, const Knot& kn) { return x < kn.t; });
      const Knot& hi = *it;
      const Knot& lo = *(it - 1);
      double w = (t - lo.t) / (hi.t - lo.t);
      return lo.v + w * (hi.v - lo.v);
    }
  }
  throw BadSpecError("unreachable weight kind");
}

std::string ConcaveFn::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Power:
      os << "power(alpha=" << alpha_ << ")";
      break;
    case Kind::Log1p:
      os << "log1p";
      break;
    case Kind::PhiZero:
      os << "phi0";
      break;
    case Kind::PiecewiseLinear:
      os << "pwl(" << knots_.size() << " knots)";
      break;
  }
  return os.str();
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw BadSpecError("geometric_grid: need 0 < lo < hi and points >= 2");
  }
  std::vector<double> g(static_cast<size_t>(points));
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    g[static_cast<size_t>(i)] =
        std::exp(llo + (lhi - llo) * i / (points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

const std::vector<double>& default_probe_grid() {
  static const std::vector<double> grid = geometric_grid(1e-12, 1e12, 241);
  return grid;
}

ConcavityDiagnostic check_concave_increasing(const ConcaveFn& f,
                                             const std::vector<double>& grid) {
  if (grid.size() < 3) {
    throw BadSpecError("check_concave_increasing: need at least 3 grid points");
  }
  ConcavityDiagnostic d;
  std::vector<double> v(grid.size());
  double vmax = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    v[i] = f(grid[i]);
    vmax = std::max(vmax, std::abs(v[i]));
  }
  auto flag = [&](double t, const std::string& why) {
    if (!d.first_violation) d.first_violation = {t, why};
    d.passed = false;
  };
  const double vtol = 1e-9 * std::max(1.0, vmax);
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (v[i + 1] < v[i] - vtol) {
      d.monotone = false;
      flag(grid[i + 1], "value decreased");
      break;
    }
  }
  // chord-slope comparison in cross-product form to dodge tiny denominators:
  // slope(i,i+1) >= slope(i+1,i+2)  <=>  dv1*dt2 >= dv2*dt1
  for (size_t i = 0; i + 2 < grid.size(); ++i) {
    double dt1 = grid[i + 1] - grid[i], dv1 = v[i + 1] - v[i];
    double dt2 = grid[i + 2] - grid[i + 1], dv2 = v[i + 2] - v[i + 1];
    double lhs = dv1 * dt2, rhs = dv2 * dt1;
    // tolerance in the units of the cross products themselves; a global
    // value scale would drown local kinks on wide geometric grids
    double scale =
        1e-9 * (std::abs(dv1) * dt2 + std::abs(dv2) * dt1 + 1e-300);
    if (lhs < rhs - scale) {
      d.concave = false;
      flag(grid[i + 2], "chord slope increased");
      break;
    }
  }
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    double r0 = v[i] / grid[i], r1 = v[i + 1] / grid[i + 1];
    double scale = 1e-9 * std::max(r0, 1.0);
    if (r1 > r0 + scale) {
      d.ratio_decreasing = false;
      flag(grid[i + 1], "f(t)/t increased");
      break;
    }
  }
  return d;
}

ConcaveFn least_concave_majorant(const std::vector<Knot>& points) {
  if (points.empty()) throw EmptyInputError("least_concave_majorant: no points");
  std::vector<Knot> pts = points;
  pts.push_back(Knot{0.0, 0.0});
  std::sort(pts.begin(), pts.end(), [](const Knot& a, const Knot& b) {
    return a.t < b.t || (a.t == b.t && a.v < b.v);
  });
  // collapse duplicate abscissae, keeping the larger value
  std::vector<Knot> uniq;
  for (const Knot& p : pts) {
    if (!(p.t >= 0.0) || !(p.v >= 0.0) || !std::isfinite(p.t) ||
        !std::isfinite(p.v)) {
      throw BadSpecError("least_concave_majorant: points must be finite, >= 0");
    }
    if (!uniq.empty() && uniq.back().t == p.t) {
      uniq.back().v = std::max(uniq.back().v, p.v);
    } else {
      uniq.push_back(p);
    }
  }
  // monotone-chain upper hull; strict right turns only, so collinear interior
  // points are dropped and the result is idempotent
  std::vector<Knot> hull;
  for (const Knot& p : uniq) {
    while (hull.size() >= 2) {
      const Knot& a = hull[hull.size() - 2];
      const Knot& b = hull[hull.size() - 1];
      double cross = (b.t - a.t) * (p.v - a.v) - (b.v - a.v) * (p.t - a.t);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  // a decreasing final chord cannot belong to an increasing majorant; lift it
  // to a flat extension from its start
  while (hull.size() >= 2 && hull.back().v < hull[hull.size() - 2].v) {
    hull.pop_back();
  }
  return ConcaveFn::piecewise_linear(std::move(hull));
}

double dilation_function(const ConcaveFn& f, double s,
                         const std::vector<double>& probe_grid) {
  if (!(s > 0.0)) throw BadSpecError("dilation_function: s must be positive");
  double sup = 0.0;
  for (double t : probe_grid) {
    double denom = f(t);
    if (denom <= 0.0) continue;
    sup = std::max(sup, f(s * t) / denom);
  }
  if (sup == 0.0) throw BadSpecError("dilation_function: weight vanished on grid");
  return sup;
}

double dilation_function(const ConcaveFn& f, double s) {
  return dilation_function(f, s, default_probe_grid());
}

DilationIndices dilation_indices(const ConcaveFn& f) {
  const double s_small = std::ldexp(1.0, -20);
  const double s_large = std::ldexp(1.0, 20);
  double m_small = dilation_function(f, s_small);
  double m_large = dilation_function(f, s_large);
  // log M(s) / log s: at s << 1 both logs are negative, at s >> 1 positive.
  return DilationIndices{std::log(m_small) / std::log(s_small),
                         std::log(m_large) / std::log(s_large)};
}

EmbeddingVerdict embeds_in_lambda_log(const ConcaveFn& f) {
  const auto& grid = default_probe_grid();
  double sup = 0.0;
  for (double t : grid) {
    double denom = f(t);
    if (denom <= 0.0) return EmbeddingVerdict{false, HUGE_VAL};
    sup = std::max(sup, std::log1p(t) / denom);
  }
  // stability heuristic: over the last two probed decades the ratio must be
  // nonincreasing, otherwise the grid supremum may still be climbing
  bool stable = true;
  double hi = grid.back();
  double prev = -HUGE_VAL;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < hi * 1e-2) continue;
    double r = std::log1p(grid[i]) / f(grid[i]);
    if (prev != -HUGE_VAL && r > prev * (1.0 + 1e-12)) {
      stable = false;
      break;
    }
    prev = r;
  }
  return EmbeddingVerdict{stable && std::isfinite(sup), sup};
}

}  // namespace lorentzlab::concave
