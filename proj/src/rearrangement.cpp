#include "lorentzlab/rearrangement.hpp"

#include <algorithm>
#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/quadrature.hpp"

namespace lorentzlab::rearrangement {

StepFn StepFn::make(std::vector<double> breakpoints,
                    std::vector<double> values) {
  if (breakpoints.size() != values.size()) {
    throw BadSpecError("StepFn: breakpoints/values length mismatch");
  }
  double prev = 0.0;
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > prev) || !std::isfinite(breakpoints[i]) ||
        !std::isfinite(values[i])) {
      throw NotDecreasingError(
          "StepFn: breakpoints must be finite and strictly increasing from 0");
    }
    prev = breakpoints[i];
  }
  StepFn x;
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    if (!x.values.empty() && x.values.back() == values[i]) {
      x.breakpoints.back() = breakpoints[i];  // merge equal adjacent pieces
    } else {
      x.breakpoints.push_back(breakpoints[i]);
      x.values.push_back(values[i]);
    }
  }
  while (!x.values.empty() && x.values.back() == 0.0) {
    x.breakpoints.pop_back();
    x.values.pop_back();
  }
  return x;
}

double StepFn::operator()(double t) const {
  if (!(t > 0.0)) return 0.0;
  // first breakpoint >= t identifies the piece (t_{k-1}, t_k]
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
  if (it == breakpoints.end()) return 0.0;
  return values[static_cast<size_t>(it - breakpoints.begin())];
}

DecreasingStep DecreasingStep::make(
    std::vector<std::pair<double, double>> layers) {
  std::vector<std::pair<double, double>> in = std::move(layers);
  for (auto& [alpha, u] : in) {
    if (!(u > 0.0) || !std::isfinite(u) || !(alpha >= 0.0) ||
        !std::isfinite(alpha)) {
      throw BadSpecError("DecreasingStep: layers need u > 0 and alpha >= 0");
    }
  }
  std::sort(in.begin(), in.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  DecreasingStep mu;
  for (const auto& [alpha, u] : in) {
    if (alpha == 0.0) continue;
    if (!mu.layers.empty() && mu.layers.back().second == u) {
      mu.layers.back().first += alpha;
    } else {
      mu.layers.emplace_back(alpha, u);
    }
  }
  return mu;
}

DecreasingStep DecreasingStep::indicator(double u, double height) {
  return make({{height, u}});
}

double DecreasingStep::operator()(double t) const {
  if (!(t > 0.0)) return max_value();
  double v = 0.0;
  for (const auto& [alpha, u] : layers) {
    if (u >= t) v += alpha;
  }
  return v;
}

double DecreasingStep::max_value() const {
  double v = 0.0;
  for (const auto& [alpha, u] : layers) v += alpha;
  return v;
}

double DecreasingStep::total_integral() const {
  double s = 0.0;
  for (const auto& [alpha, u] : layers) s += alpha * u;
  return s;
}

StepFn DecreasingStep::to_step_fn() const {
  // piece on (u_{i-1}, u_i] carries the suffix sum of alpha from layer i on
  std::vector<double> bps, vals;
  double suffix = max_value();
  for (const auto& [alpha, u] : layers) {
    bps.push_back(u);
    vals.push_back(suffix);
    suffix -= alpha;
  }
  return StepFn::make(std::move(bps), std::move(vals));
}

IntervalSet IntervalSet::make(
    std::vector<std::pair<double, double>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  double prev_end = 0.0;
  for (const auto& [a, b] : intervals) {
    if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
      throw BadSpecError("IntervalSet: need 0 <= a < b, finite");
    }
    if (a < prev_end) {
      throw BadSpecError("IntervalSet: intervals must be disjoint");
    }
    prev_end = b;
  }
  return IntervalSet{std::move(intervals)};
}

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& [a, b] : intervals) m += b - a;
  return m;
}

StepFn IntervalSet::indicator() const {
  std::vector<double> bps, vals;
  for (const auto& [a, b] : intervals) {
    if (a > (bps.empty() ? 0.0 : bps.back())) {
      bps.push_back(a);
      vals.push_back(0.0);
    }
    bps.push_back(b);
    vals.push_back(1.0);
  }
  return StepFn::make(std::move(bps), std::move(vals));
}

DecreasingStep rearrange(const StepFn& x) {
  // pieces (|value|, length), sorted by |value| descending, then converted
  // to layer-cake coefficients at cumulative lengths
  std::vector<std::pair<double, double>> pieces;
  double prev = 0.0;
  for (size_t i = 0; i < x.breakpoints.size(); ++i) {
    double len = x.breakpoints[i] - prev;
    prev = x.breakpoints[i];
    double v = std::abs(x.values[i]);
    if (v > 0.0) pieces.emplace_back(v, len);
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<double, double>> layers;
  double cum = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    cum += pieces[i].second;
    if (i + 1 < pieces.size() && pieces[i + 1].first == pieces[i].first) {
      continue;  // same level continues; extend the measure
    }
    double next = (i + 1 < pieces.size()) ? pieces[i + 1].first : 0.0;
    layers.emplace_back(pieces[i].first - next, cum);
  }
  return DecreasingStep::make(std::move(layers));
}

double distribution(const StepFn& x, double s) {
  if (!(s > 0.0)) throw BadSpecError("distribution: s must be positive");
  double m = 0.0;
  double prev = 0.0;
  for (size_t i = 0; i < x.breakpoints.size(); ++i) {
    if (std::abs(x.values[i]) >= s) m += x.breakpoints[i] - prev;
    prev = x.breakpoints[i];
  }
  return m;
}

double distribution(const DecreasingStep& x, double s) {
  if (!(s > 0.0)) throw BadSpecError("distribution: s must be positive");
  // {mu >= s} = (0, u] for the largest u whose suffix-sum reaches s; the
  // suffix sums grow while u shrinks, so the first hit wins
  double suffix = 0.0;
  for (auto it = x.layers.rbegin(); it != x.layers.rend(); ++it) {
    suffix += it->first;
    if (suffix >= s) return it->second;
  }
  return 0.0;
}

double lorentz_norm(const DecreasingStep& mu, const concave::ConcaveFn& phi) {
  double s = 0.0;
  for (const auto& [alpha, u] : mu.layers) s += alpha * phi(u);
  return s;
}

double lorentz_seq_norm(const Seq& a, const concave::ConcaveFn& phi) {
  std::vector<double> m;
  m.reserve(a.entries.size());
  for (double v : a.entries) m.push_back(std::abs(v));
  std::sort(m.begin(), m.end(), std::greater<>());
  double s = 0.0;
  double phi_n = 0.0;  // phi(0)
  for (size_t n = 0; n < m.size(); ++n) {
    if (m[n] == 0.0) break;
    double phi_n1 = phi(static_cast<double>(n + 1));
    s += m[n] * (phi_n1 - phi_n);
    phi_n = phi_n1;
  }
  return s;
}

double l1_linf_norm(const DecreasingStep& z) {
  double s = 0.0;
  for (const auto& [alpha, u] : z.layers) s += alpha * std::min(u, 1.0);
  return s;
}

double l1_linf_norm(const std::function<double(double)>& z) {
  // monotonicity spot-check on 64 geometric points of (0, 1]
  const auto grid = concave::geometric_grid(1e-8, 1.0, 64);
  double scale = 0.0;
  for (double t : grid) scale = std::max(scale, std::abs(z(t)));
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (z(grid[i + 1]) > z(grid[i]) + 1e-9 * std::max(1.0, scale)) {
      throw NotDecreasingError(
          "l1_linf_norm: sampled function is not nonincreasing on (0,1)");
    }
  }
  // geometric composite quadrature; the head below 1e-14 is approximated by
  // a constant panel, which is exact for bounded z and relatively < 1e-12
  // for the logarithmic singularities produced by the averaging operator
  const double t_lo = 1e-14;
  double head = z(t_lo) * t_lo;
  return head + quad::gl16_geometric(z, t_lo, 1.0, 8);
}

}  // namespace lorentzlab::rearrangement
