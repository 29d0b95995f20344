#include "lorentzlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lorentzlab/calderon.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/optimal_range.hpp"
#include "lorentzlab/parallel.hpp"
#include "lorentzlab/splitmix.hpp"

namespace lorentzlab::harness {

using concave::ConcaveFn;
using rearrangement::DecreasingStep;
using rearrangement::IntervalSet;
using rearrangement::StepFn;
using spectral::CMatrix;
using spectral::LipschitzFn;

namespace {

SplitMix64 sample_stream(const CorpusSpec& spec, std::size_t index) {
  return SplitMix64(spec.seed ^ static_cast<std::uint64_t>(index));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string describe(const CorpusSpec& spec) {
  std::ostringstream os;
  switch (spec.kind) {
    case CorpusKind::StepFunctions:
      os << "step_functions(seed=" << spec.seed << ",n=" << spec.size
         << ",layers<=" << spec.max_layers << ",decades=" << spec.decades << ")";
      break;
    case CorpusKind::IntervalSets:
      os << "interval_sets(seed=" << spec.seed << ",n=" << spec.size
         << ",decades=" << spec.decades << ")";
      break;
    case CorpusKind::GaussianMatrices:
      os << "gaussian_matrices(seed=" << spec.seed << ",n=" << spec.size
         << ",dim=" << spec.dim << ")";
      break;
    case CorpusKind::HermitianPairs:
      os << "hermitian_pairs(seed=" << spec.seed << ",n=" << spec.size
         << ",dim=" << spec.dim << ")";
      break;
    case CorpusKind::LipschitzFunctions:
      os << "lipschitz_functions(seed=" << spec.seed << ",n=" << spec.size << ")";
      break;
  }
  return os.str();
}

std::vector<DecreasingStep> gen_decreasing_steps(const CorpusSpec& spec) {
  if (spec.size < 1) throw BadSpecError("gen_decreasing_steps: size must be >= 1");
  std::vector<DecreasingStep> out;
  out.reserve(static_cast<size_t>(spec.size));
  double half = spec.decades / 2.0;
  for (int i = 0; i < spec.size; ++i) {
    auto rng = sample_stream(spec, static_cast<size_t>(i));
    int layers = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_layers)));
    std::vector<std::pair<double, double>> ls;
    for (int k = 0; k < layers; ++k) {
      double u = rng.log_uniform(-half, half);
      double alpha = rng.log_uniform(-2.0, 2.0);
      ls.emplace_back(alpha, u);
    }
    out.push_back(DecreasingStep::make(std::move(ls)));
  }
  return out;
}

std::vector<StepFn> gen_step_functions(const CorpusSpec& spec) {
  if (spec.size < 1) throw BadSpecError("gen_step_functions: size must be >= 1");
  std::vector<StepFn> out;
  out.reserve(static_cast<size_t>(spec.size));
  double half = spec.decades / 2.0;
  for (int i = 0; i < spec.size; ++i) {
    auto rng = sample_stream(spec, static_cast<size_t>(i));
    int pieces = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_layers)));
    std::vector<double> bps;
    bool distinct = false;
    while (!distinct) {
      bps.clear();
      for (int k = 0; k < pieces; ++k) bps.push_back(rng.log_uniform(-half, half));
      std::sort(bps.begin(), bps.end());
      distinct = std::adjacent_find(bps.begin(), bps.end()) == bps.end();
    }
    std::vector<double> vals;
    for (int k = 0; k < pieces; ++k) {
      double mag = rng.log_uniform(-2.0, 2.0);
      vals.push_back(rng.uniform01() < 0.5 ? -mag : mag);
    }
    out.push_back(StepFn::make(std::move(bps), std::move(vals)));
  }
  return out;
}

std::vector<IntervalSet> gen_interval_sets(const CorpusSpec& spec) {
  if (spec.size < 1) throw BadSpecError("gen_interval_sets: size must be >= 1");
  std::vector<IntervalSet> out;
  out.reserve(static_cast<size_t>(spec.size));
  double half = spec.decades / 2.0;
  for (int i = 0; i < spec.size; ++i) {
    auto rng = sample_stream(spec, static_cast<size_t>(i));
    int m = 1 + static_cast<int>(rng.below(4));
    std::vector<double> pts;
    bool distinct = false;
    while (!distinct) {
      pts.clear();
      for (int k = 0; k < 2 * m; ++k) pts.push_back(rng.log_uniform(-half, half));
      std::sort(pts.begin(), pts.end());
      distinct = std::adjacent_find(pts.begin(), pts.end()) == pts.end();
    }
    std::vector<std::pair<double, double>> iv;
    for (int k = 0; k < m; ++k) {
      iv.emplace_back(pts[static_cast<size_t>(2 * k)], pts[static_cast<size_t>(2 * k + 1)]);
    }
    out.push_back(IntervalSet::make(std::move(iv)));
  }
  return out;
}

namespace {

CMatrix gaussian_matrix(SplitMix64& rng, int dim) {
  CMatrix g = CMatrix::zero(dim);
  g.hermitian = false;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      auto [re, im] = rng.gaussian_pair();
      g.at(i, j) = spectral::cdouble{re, im};
    }
  }
  return g;
}

CMatrix hermitize(const CMatrix& g) {
  CMatrix a = CMatrix::zero(g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      a.at(i, j) = 0.5 * (g.at(i, j) + std::conj(g.at(j, i)));
    }
  }
  a.hermitian = true;
  return a;
}

}  // namespace

std::vector<CMatrix> gen_gaussian_matrices(const CorpusSpec& spec) {
  if (spec.size < 1 || spec.dim < 1) {
    throw BadSpecError("gen_gaussian_matrices: bad size or dim");
  }
  std::vector<CMatrix> out;
  out.reserve(static_cast<size_t>(spec.size));
  for (int i = 0; i < spec.size; ++i) {
    auto rng = sample_stream(spec, static_cast<size_t>(i));
    out.push_back(gaussian_matrix(rng, spec.dim));
  }
  return out;
}

std::vector<std::pair<CMatrix, CMatrix>> gen_hermitian_pairs(
    const CorpusSpec& spec) {
  if (spec.size < 1 || spec.dim < 1) {
    throw BadSpecError("gen_hermitian_pairs: bad size or dim");
  }
  std::vector<std::pair<CMatrix, CMatrix>> out;
  out.reserve(static_cast<size_t>(spec.size));
  for (int i = 0; i < spec.size; ++i) {
    auto rng = sample_stream(spec, static_cast<size_t>(i));
    CMatrix a = hermitize(gaussian_matrix(rng, spec.dim));
    CMatrix b = hermitize(gaussian_matrix(rng, spec.dim));
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

std::vector<LipschitzFn> gen_lipschitz_functions(const CorpusSpec& spec) {
  if (spec.size < 1) throw BadSpecError("gen_lipschitz_functions: size must be >= 1");
  std::vector<LipschitzFn> out;
  out.reserve(static_cast<size_t>(spec.size));
  for (int i = 0; i < spec.size; ++i) {
    auto rng = sample_stream(spec, static_cast<size_t>(i));
    int k = 3 + static_cast<int>(rng.below(4));
    std::vector<double> xs;
    bool spaced = false;
    while (!spaced) {
      xs.clear();
      for (int j = 0; j < k; ++j) xs.push_back(rng.uniform(-3.0, 3.0));
      std::sort(xs.begin(), xs.end());
      spaced = true;
      for (int j = 0; j + 1 < k; ++j) {
        if (xs[static_cast<size_t>(j + 1)] - xs[static_cast<size_t>(j)] < 0.1) spaced = false;
      }
    }
    std::vector<std::pair<double, double>> knots;
    for (int j = 0; j < k; ++j) knots.emplace_back(xs[static_cast<size_t>(j)], rng.uniform(-2.0, 2.0));
    out.push_back(LipschitzFn::make(std::move(knots)));
  }
  return out;
}

std::vector<double> sample_t_grid(std::uint64_t seed, std::size_t index,
                                  int count, double lo, double hi) {
  SplitMix64 rng(seed ^ static_cast<std::uint64_t>(index) ^ 0x517cc1b727220a95ull);
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid.push_back(rng.log_uniform(std::log10(lo), std::log10(hi)));
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

// ---------------------------------------------------------------------------
// frozen-constant ledger
// ---------------------------------------------------------------------------

FreezeOutcome check_frozen(const std::string& path, const FrozenConstant& c) {
  FreezeOutcome out;
  out.probe = c.probe;
  out.value = c.value;
  nlohmann::json ledger = nlohmann::json::object();
  {
    std::ifstream in(path);
    if (in.good()) {
      try {
        in >> ledger;
      } catch (const nlohmann::json::exception&) {
        out.pass = false;
        out.note = "ledger file exists but is not valid JSON";
        return out;
      }
    }
  }
  if (!ledger.contains(c.probe)) {
    ledger[c.probe] = {{"seed", c.seed}, {"corpus", c.corpus}, {"value", c.value}};
    std::ofstream outf(path);
    if (!outf.good()) {
      out.pass = false;
      out.note = "cannot write ledger at " + path;
      return out;
    }
    outf << ledger.dump(2) << "\n";
    out.recorded_now = true;
    out.reference = c.value;
    out.note = "recorded on first run";
    return out;
  }
  const auto& e = ledger[c.probe];
  out.reference = e.value("value", 0.0);
  if (e.value("seed", std::uint64_t{0}) != c.seed ||
      e.value("corpus", std::string{}) != c.corpus) {
    out.pass = false;
    out.note = "seed or corpus descriptor differs from the recorded run";
    return out;
  }
  double tol = 1e-9 * std::max(1.0, std::abs(out.reference));
  out.pass = std::abs(c.value - out.reference) <= tol;
  out.note = out.pass ? "reproduced recorded value"
                      : "value drifted from recording: got " + fmt(c.value) +
                            ", recorded " + fmt(out.reference);
  return out;
}

// ---------------------------------------------------------------------------
// the suite
// ---------------------------------------------------------------------------

namespace {

using report::ExperimentReport;

template <typename F>
ExperimentReport timed(const SuiteConfig& cfg, const std::string& name, F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r.pass = false;
    r.note = std::string("error: ") + e.what();
  }
  r.experiment = name;
  if (cfg.timing) {
    auto t1 = std::chrono::steady_clock::now();
    r.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  } else {
    r.ms = 0.0;
  }
  return r;
}

// Rebuilds A with its spectrum snapped to the three levels
// {min, midpoint, max}: guaranteed repeated eigenvalues for any dim > 3.
CMatrix snap_spectrum(const CMatrix& a) {
  auto es = spectral::hermitian_eigensystem(a);
  double lo = es.eigenvalues.front(), hi = es.eigenvalues.back();
  double diam = hi - lo;
  if (diam == 0.0) return a;
  const int n = a.n;
  CMatrix out = CMatrix::zero(n);
  std::vector<double> snapped(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    double lam = es.eigenvalues[static_cast<size_t>(k)];
    snapped[static_cast<size_t>(k)] = lo + std::round(2.0 * (lam - lo) / diam) * (diam / 2.0);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      spectral::cdouble s{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        s += es.vectors.at(i, k) * snapped[static_cast<size_t>(k)] *
             std::conj(es.vectors.at(j, k));
      }
      out.at(i, j) = i == j ? spectral::cdouble{s.real(), 0.0} : s;
      if (i != j) out.at(j, i) = std::conj(s);
    }
  }
  out.hermitian = true;
  return out;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg) {
  SuiteResult suite;
  const ConcaveFn p05 = ConcaveFn::power(0.5);
  const ConcaveFn p10 = ConcaveFn::power(1.0);
  const auto grid = concave::geometric_grid(1e-4, 1e4, 65);
  const double two_sqrt_e = 2.0 * std::exp(0.5);

  // shared assets
  const range::PsiTable tab05 = range::default_psi_table(p05, cfg.threads);
  const CorpusSpec step_spec{CorpusKind::StepFunctions, cfg.seed,
                             cfg.step_samples, 16, 8, 6.0};
  const auto steps = gen_decreasing_steps(step_spec);
  const CorpusSpec gauss_spec{CorpusKind::GaussianMatrices, cfg.seed,
                              cfg.matrix_samples, cfg.matrix_dim, 8, 6.0};
  const auto gauss = gen_gaussian_matrices(gauss_spec);

  auto push = [&](ExperimentReport r) {
    suite.all_pass = suite.all_pass && r.pass;
    suite.reports.push_back(std::move(r));
  };

  // 1: the closed form psi = alpha e^(1-alpha) u^alpha for power weights
  push(timed(cfg, "psi_closed_form", [&] {
    std::vector<double> per_alpha;
    for (double alpha : {0.25, 0.5, 0.75}) {
      ConcaveFn phi = ConcaveFn::power(alpha);
      double worst = 0.0;
      for (double u : concave::geometric_grid(1e-4, 1e4, 33)) {
        double exact = alpha * std::exp(1.0 - alpha) * std::pow(u, alpha);
        double got = range::psi_from_phi(phi, u).value;
        worst = std::max(worst, std::abs(got - exact) / exact);
      }
      per_alpha.push_back(worst);
    }
    bool pass = *std::max_element(per_alpha.begin(), per_alpha.end()) <= 1e-6;
    return report::summarize("", "alpha in {0.25,0.5,0.75} x 8 decades of u",
                             per_alpha, pass,
                             "max relative error per alpha vs the closed form");
  }));

  // 2: log(1/u) * psi(u) -> 0 for the built-in weights
  push(timed(cfg, "psi_limit", [&] {
    std::vector<double> finals;
    bool pass = true;
    for (const ConcaveFn& phi :
         {p05, ConcaveFn::log1p(), ConcaveFn::phi_zero()}) {
      auto rep = range::psi_limit_check(phi);
      finals.push_back(rep.final_over_initial);
      pass = pass && rep.passed;
    }
    return report::summarize("", "power(0.5), log1p, phi_zero; u down to 1e-12",
                             finals, pass,
                             "final/initial of log(1/u)*psi(u); all must decay");
  }));

  // 3: criterion constant against the table psi (optimal range of power(0.5))
  push(timed(cfg, "criterion_constant_exact_psi", [&] {
    auto crit = range::criterion_continuous(p05, tab05.fn, grid);
    bool pass = crit.verdict == range::Verdict::BoundedWithC &&
                std::abs(crit.c_estimate - two_sqrt_e) <= 1e-3;
    return report::summarize(
        "", "derived psi table for power(0.5), 8-decade u grid", crit.ratios,
        pass, "c = " + fmt(crit.c_estimate) + ", target 2*sqrt(e)");
  }));

  // 4: criterion with psi = phi = power(0.5): constant 1/(alpha(1-alpha)) = 4
  push(timed(cfg, "criterion_constant_self", [&] {
    auto crit = range::criterion_continuous(p05, p05, grid);
    bool pass = crit.verdict == range::Verdict::BoundedWithC &&
                std::abs(crit.c_estimate - 4.0) <= 1e-3;
    return report::summarize("", "psi = phi = power(0.5), 8-decade u grid",
                             crit.ratios, pass,
                             "c = " + fmt(crit.c_estimate) + ", target 4");
  }));

  // 5: linear weight: the tail integral diverges
  push(timed(cfg, "criterion_divergent", [&] {
    auto crit = range::criterion_continuous(p10, p10, grid);
    bool pass = crit.verdict == range::Verdict::TailDivergent;
    return report::summarize("", "psi = phi = power(1.0)", {}, pass, crit.note);
  }));

  // 6: discrete criterion, power(0.5): ratios settle in [3, 5] (limit 4)
  push(timed(cfg, "criterion_discrete_bounded", [&] {
    auto crit = range::criterion_discrete(p05, 4096);
    bool pass = crit.verdict == range::Verdict::BoundedWithC;
    for (size_t i = 63; i < crit.ratios.size(); ++i) {
      pass = pass && crit.ratios[i] >= 3.0 && crit.ratios[i] <= 5.0;
    }
    std::vector<double> sub;
    for (int n = 1; n <= 4096; n *= 2) sub.push_back(crit.ratios[static_cast<size_t>(n - 1)]);
    return report::summarize("", "phi = power(0.5), n <= 4096", sub, pass,
                             "ratios at powers of two; window check on n >= 64");
  }));

  // 7: discrete criterion, power(1.0): flagged as an unbounded trend
  push(timed(cfg, "criterion_discrete_unbounded", [&] {
    auto crit = range::criterion_discrete(p10, 4096);
    bool pass = crit.verdict == range::Verdict::RatioUnboundedTrend;
    std::vector<double> sub;
    for (int n = 1; n <= 4096; n *= 2) sub.push_back(crit.ratios[static_cast<size_t>(n - 1)]);
    return report::summarize("", "phi = power(1.0), n <= 4096", sub, pass,
                             crit.note);
  }));

  // 8: the (L1+Linf)-vs-Lambda_phi0 sandwich, with the exact chi_(0,1) anchor
  push(timed(cfg, "phi0_sandwich", [&] {
    std::vector<double> ratios(steps.size(), 0.0);
    std::vector<char> ok(steps.size(), 1);
    parallel_for(
        steps.size(),
        [&](size_t i) {
          auto rep = range::phi0_sandwich_check(steps[i]);
          ratios[i] = rep.lorentz_phi0_norm / rep.image_norm;
          ok[i] = rep.passed ? 1 : 0;
        },
        cfg.threads);
    bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c == 1; });
    auto anchor = range::phi0_sandwich_check(DecreasingStep::indicator(1.0));
    pass = pass && std::abs(anchor.image_norm - 2.0) <= 1e-9 &&
           std::abs(anchor.lorentz_phi0_norm - 2.0) <= 1e-9;
    return report::summarize("", describe(step_spec), ratios, pass,
                             "lorentz/image ratios (must sit in [1, 2]); "
                             "chi_(0,1) anchors both norms at 2");
  }));

  // 9: images of interval sets vs twice the image of one interval of the
  // same measure
  push(timed(cfg, "interval_factor_two", [&] {
    const CorpusSpec ispec{CorpusKind::IntervalSets, cfg.seed,
                           cfg.step_samples, 16, 8, 6.0};
    const auto sets = gen_interval_sets(ispec);
    std::vector<double> worst(sets.size(), 0.0);
    parallel_for(
        sets.size(),
        [&](size_t i) {
          StepFn ind = sets[i].indicator();
          auto img =
              calderon::apply_calderon(DecreasingStep::indicator(sets[i].measure()));
          double w = 0.0;
          for (double t : sample_t_grid(cfg.seed, i, 32, 1e-4, 1e4)) {
            w = std::max(w, calderon::calderon_of_step(ind, t) / (2.0 * img(t)));
          }
          worst[i] = w;
        },
        cfg.threads);
    double m = *std::max_element(worst.begin(), worst.end());
    return report::summarize("", describe(ispec), worst, m <= 1.0 + 1e-12,
                             "max over 32 grid points of S(chi_set) / "
                             "(2 S(chi_interval)); must stay <= 1");
  }));

  // 10: Hilbert-transform domination of the Calderon image
  push(timed(cfg, "hilbert_domination", [&] {
    std::vector<double> slacks(steps.size(), 0.0);
    std::vector<char> ok(steps.size(), 1);
    parallel_for(
        steps.size(),
        [&](size_t i) {
          auto grid_t = sample_t_grid(cfg.seed, i, 32, 1e-4, 1e4);
          auto rep = calderon::check_hilbert_domination(steps[i], grid_t);
          slacks[i] = rep.min_slack;
          ok[i] = rep.passed ? 1 : 0;
        },
        cfg.threads);
    bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c == 1; });
    double lhs = std::abs(
        calderon::hilbert_of_step(DecreasingStep::indicator(1.0).to_step_fn(), -1.0));
    double rhs = 1.0 / (2.0 * 3.14159265358979323846);
    pass = pass && std::abs(lhs - 0.2206356001526516) <= 1e-12 && lhs >= rhs;
    return report::summarize("", describe(step_spec), slacks, pass,
                             "min slack of |H chi(-t)| - S/(2 pi); anchor "
                             "log(2)/pi vs 1/(2 pi) at t = 1");
  }));

  // 11: resolution-limited estimate of mu(Hx) against S(mu(x)), recorded only
  push(timed(cfg, "hilbert_range_constant", [&] {
    const CorpusSpec sspec{CorpusKind::StepFunctions, cfg.seed, 20, 16, 8, 6.0};
    const auto signed_steps = gen_step_functions(sspec);
    std::vector<double> ratios(signed_steps.size(), 0.0);
    parallel_for(
        signed_steps.size(),
        [&](size_t i) {
          const StepFn& x = signed_steps[i];
          auto est = calderon::hilbert_rearrangement_estimate(
              x, 4096, 10.0 * x.support_end());
          auto img = calderon::apply_calderon(rearrangement::rearrange(x));
          double w = 0.0;
          for (size_t k = 0; k < est.values.size(); ++k) {
            double t = (static_cast<double>(k) + 1.0) * est.cell_width;
            w = std::max(w, est.values[k] / img(t));
          }
          ratios[i] = w;
        },
        cfg.threads);
    return report::summarize("", "signed " + describe(sspec), ratios, true,
                             "recorded only: grid estimate truncates the "
                             "logarithmic spikes of Hx");
  }));

  // 12: single-indicator witnesses: norm within 2 psi(u), image covers (0, u]
  push(timed(cfg, "witness_indicator", [&] {
    const ConcaveFn philog = ConcaveFn::log1p();
    const int n = cfg.witness_samples;
    std::vector<double> ratios(static_cast<size_t>(n), 0.0);
    std::vector<char> ok(static_cast<size_t>(n), 1);
    parallel_for(
        static_cast<size_t>(n),
        [&](size_t i) {
          SplitMix64 rng(cfg.seed ^ i ^ 0x9e3779b97f4a7c15ull);
          double u = rng.log_uniform(-3.0, 3.0);
          auto wit = range::witness_indicator(philog, u);
          ratios[i] = wit.norm_phi / wit.psi_u;
          ok[i] = (wit.domination_ok && wit.norm_ok) ? 1 : 0;
        },
        cfg.threads);
    bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c == 1; });
    return report::summarize("", "log1p weight, 100 log-uniform u in [1e-3,1e3]",
                             ratios, pass,
                             "witness norm over psi(u); bound is 2");
  }));

  // 13: dyadic witnesses for general decreasing steps: factor 8
  push(timed(cfg, "witness_general", [&] {
    const size_t n = std::min(steps.size(), static_cast<size_t>(cfg.witness_samples));
    std::vector<double> ratios(n, 0.0);
    std::vector<char> ok(n, 1);
    parallel_for(
        n,
        [&](size_t i) {
          auto wit = range::witness_general(steps[i], p05);
          ratios[i] = wit.ratio;
          ok[i] = (wit.domination_ok && wit.factor8_ok) ? 1 : 0;
        },
        cfg.threads);
    bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c == 1; });
    return report::summarize("", describe(step_spec) + " (first 100)", ratios,
                             pass, "witness-norm factor vs ||x||_psi; bound 8");
  }));

  // 14: norm ratios ||Sx||_psi / ||x||_phi against the criterion ceiling
  push(timed(cfg, "calderon_boundedness", [&] {
    std::vector<DecreasingStep> corpus(
        steps.begin(), steps.begin() + std::min<size_t>(steps.size(), 100));
    auto rep = range::boundedness_probe(p05, tab05.fn, corpus);
    rep.corpus = describe(step_spec) + " (first 100)";
    return rep;
  }));

  // 15: the exact commutator identity through the divided-difference multiplier
  push(timed(cfg, "doi_commutator_identity", [&] {
    const CorpusSpec pspec{CorpusKind::HermitianPairs, cfg.seed,
                           cfg.doi_samples, 16, 8, 6.0};
    const auto pairs = gen_hermitian_pairs(pspec);
    const CorpusSpec fspec{CorpusKind::LipschitzFunctions, cfg.seed,
                           cfg.doi_samples, 16, 8, 6.0};
    const auto fns = gen_lipschitz_functions(fspec);
    std::vector<double> scaled(pairs.size(), 0.0);
    std::vector<char> ok(pairs.size(), 1);
    parallel_for(
        pairs.size(),
        [&](size_t i) {
          CMatrix a = pairs[i].first;
          if (i % 2 == 1) a = snap_spectrum(a);  // force repeated eigenvalues
          auto rep = spectral::commutator_identity_check(fns[i], a, pairs[i].second);
          scaled[i] = rep.deviation / rep.scale;
          ok[i] = rep.ok ? 1 : 0;
        },
        cfg.threads);
    bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c == 1; });
    return report::summarize("", describe(pspec) + " + " + describe(fspec),
                             scaled, pass,
                             "deviation/scale; bound 1e-10; odd samples have "
                             "snapped (repeated) spectra");
  }));

  // 16: weak-(1,1) constant of the triangular truncation on trace-class
  push(timed(cfg, "weak_l1_truncation", [&] {
    std::vector<double> ratios(gauss.size(), 0.0);
    parallel_for(
        gauss.size(),
        [&](size_t i) { ratios[i] = spectral::weak_l1_probe(gauss[i]); },
        cfg.threads);
    double mx = *std::max_element(ratios.begin(), ratios.end());
    bool pass = mx <= 10.0;
    std::string note = "sup (n+1) mu_n(T V) / ||V||_S1; ceiling 10";
    if (!cfg.constants_path.empty()) {
      auto fz = check_frozen(cfg.constants_path,
                             {"weak_l1_truncation", cfg.seed, describe(gauss_spec), mx});
      pass = pass && fz.pass;
      note += "; freeze: " + fz.note;
      suite.freezes.push_back(std::move(fz));
    }
    return report::summarize("", describe(gauss_spec), ratios, pass, note);
  }));

  // 17: truncation into the derived range ideal
  push(timed(cfg, "truncation_range", [&] {
    auto res = spectral::truncation_range_probe(gauss, p05, tab05.fn, cfg.threads);
    bool pass = true;
    std::string note = "norm ratios ||T V||_psi / ||V||_phi; max pointwise "
                       "mu_n(T V)/(S mu(V))_n = " + fmt(res.max_pointwise_ratio);
    if (!cfg.constants_path.empty()) {
      auto fz = check_frozen(cfg.constants_path,
                             {"truncation_range", cfg.seed, describe(gauss_spec),
                              res.max_norm_ratio});
      pass = pass && fz.pass;
      note += "; freeze: " + fz.note;
      suite.freezes.push_back(std::move(fz));
    }
    return report::summarize("", describe(gauss_spec), res.norm_ratios, pass, note);
  }));

  // 18: operator-Lipschitz ratios, direct and through the block commutator
  push(timed(cfg, "lipschitz_bound", [&] {
    const CorpusSpec pspec{CorpusKind::HermitianPairs, cfg.seed, 30, 24, 8, 6.0};
    const auto pairs = gen_hermitian_pairs(pspec);
    const CorpusSpec fspec{CorpusKind::LipschitzFunctions, cfg.seed, 30, 24, 8, 6.0};
    const auto fns = gen_lipschitz_functions(fspec);
    std::vector<double> ratios(pairs.size(), 0.0);
    std::vector<double> blocks(pairs.size(), 0.0);
    parallel_for(
        pairs.size(),
        [&](size_t i) {
          auto res = spectral::lipschitz_probe(fns[i], pairs[i].first,
                                               pairs[i].second, p05, tab05.fn);
          ratios[i] = res.ratio;
          blocks[i] = res.block_ratio;
        },
        cfg.threads);
    double mx = *std::max_element(ratios.begin(), ratios.end());
    double mb = *std::max_element(blocks.begin(), blocks.end());
    bool pass = true;
    std::string note = "||f(X)-f(Y)||_psi / (lip ||X-Y||_phi); max block-route "
                       "ratio " + fmt(mb);
    if (!cfg.constants_path.empty()) {
      auto fz = check_frozen(cfg.constants_path,
                             {"lipschitz_bound", cfg.seed, describe(pspec), mx});
      pass = pass && fz.pass;
      note += "; freeze: " + fz.note;
      suite.freezes.push_back(std::move(fz));
    }
    return report::summarize("", describe(pspec) + " + " + describe(fspec),
                             ratios, pass, note);
  }));

  return suite;
}

}  // namespace lorentzlab::harness
