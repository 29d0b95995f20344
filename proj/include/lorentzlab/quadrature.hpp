#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace lorentzlab::quad {

// 16-point Gauss-Legendre rule on [-1, 1], abscissae/weights to 19 digits.
inline constexpr std::array<double, 8> kGl16Nodes = {
    0.0950125098376374401853, 0.2816035507792589132304,
    0.4580167776572273863424, 0.6178762444026437484467,
    0.7554044083550030338951, 0.8656312023878317438805,
    0.9445750230732325760780, 0.9894009349916499325962};

inline constexpr std::array<double, 8> kGl16Weights = {
    0.1894506104550684962854, 0.1826034150449235888667,
    0.1691565193950025381893, 0.1495959888165767320815,
    0.1246289712555338720525, 0.0951585116824927848099,
    0.0622535239386478928628, 0.0271524594117540948518};

template <class F>
double gl16(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double d = half * kGl16Nodes[i];
    acc += kGl16Weights[i] * (f(mid - d) + f(mid + d));
  }
  return half * acc;
}

// Composite rule with panel boundaries spaced geometrically on [a, b], a > 0.
template <class F>
double gl16_geometric(F&& f, double a, double b, int panels_per_decade = 8) {
  if (!(a > 0.0) || !(b > a)) return 0.0;
  const double decades = std::log10(b / a);
  int panels = static_cast<int>(std::ceil(decades * panels_per_decade));
  if (panels < 1) panels = 1;
  const double step = std::log(b / a) / panels;
  double acc = 0.0;
  double lo = a;
  for (int p = 0; p < panels; ++p) {
    const double hi = (p + 1 == panels) ? b : a * std::exp((p + 1) * step);
    acc += gl16(f, lo, hi);
    lo = hi;
  }
  return acc;
}

// Composite rule with uniform panels on [a, b].
template <class F>
double gl16_uniform(F&& f, double a, double b, int panels) {
  if (panels < 1) panels = 1;
  const double step = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    acc += gl16(f, a + p * step, a + (p + 1) * step);
  }
  return acc;
}

}  // namespace lorentzlab::quad
