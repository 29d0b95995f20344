#include "lorentzlab/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lorentzlab/errors.hpp"

namespace lorentzlab::json_io {

using nlohmann::json;

namespace {

std::string sig12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

json to_json(const concave::ConcaveFn& f) {
  switch (f.kind()) {
    case concave::ConcaveFn::Kind::Power:
      return {{"kind", "power"}, {"alpha", f.alpha()}};
    case concave::ConcaveFn::Kind::Log1p:
      return {{"kind", "log1p"}};
    case concave::ConcaveFn::Kind::PhiZero:
      return {{"kind", "phi_zero"}};
    case concave::ConcaveFn::Kind::PiecewiseLinear:
      break;
  }
  json knots = json::array();
  for (const auto& k : f.knots()) knots.push_back({k.t, k.v});
  return {{"kind", "pwl"}, {"knots", knots}};
}

concave::ConcaveFn concave_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw BadSpecError("weight spec: expected an object with a \"kind\" string");
  }
  std::string kind = j["kind"];
  if (kind == "power") {
    if (!j.contains("alpha") || !j["alpha"].is_number()) {
      throw BadSpecError("weight spec: power needs a numeric \"alpha\"");
    }
    return concave::ConcaveFn::power(j["alpha"].get<double>());
  }
  if (kind == "log1p") return concave::ConcaveFn::log1p();
  if (kind == "phi_zero") return concave::ConcaveFn::phi_zero();
  if (kind == "pwl") {
    if (!j.contains("knots") || !j["knots"].is_array()) {
      throw BadSpecError("weight spec: pwl needs a \"knots\" array");
    }
    std::vector<concave::Knot> ks;
    for (const auto& e : j["knots"]) {
      if (!e.is_array() || e.size() != 2) {
        throw BadSpecError("weight spec: each knot must be [t, v]");
      }
      ks.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return concave::ConcaveFn::piecewise_linear(std::move(ks));
  }
  throw BadSpecError("weight spec: unknown kind \"" + kind + "\"");
}

concave::ConcaveFn load_concave_spec(const std::string& inline_or_path) {
  std::string s = inline_or_path;
  size_t first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && s[first] == '{') {
    json j;
    try {
      j = json::parse(s);
    } catch (const json::exception& e) {
      throw BadSpecError(std::string("weight spec: invalid JSON: ") + e.what());
    }
    return concave_from_json(j);
  }
  std::ifstream in(inline_or_path);
  if (!in.good()) {
    throw BadSpecError("weight spec: cannot open file " + inline_or_path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw BadSpecError(std::string("weight spec: invalid JSON file: ") + e.what());
  }
  return concave_from_json(j);
}

json to_json(const rearrangement::StepFn& x) {
  return {{"breakpoints", x.breakpoints}, {"values", x.values}};
}

rearrangement::StepFn step_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values")) {
    throw BadSpecError("step spec: expected {\"breakpoints\":[...],\"values\":[...]}");
  }
  return rearrangement::StepFn::make(j["breakpoints"].get<std::vector<double>>(),
                                     j["values"].get<std::vector<double>>());
}

json to_json(const rearrangement::DecreasingStep& x) {
  json layers = json::array();
  for (const auto& [alpha, u] : x.layers) layers.push_back({alpha, u});
  return {{"layers", layers}};
}

rearrangement::DecreasingStep decreasing_from_json(const json& j) {
  if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array()) {
    throw BadSpecError("layer spec: expected {\"layers\":[[alpha,u],...]}");
  }
  std::vector<std::pair<double, double>> ls;
  for (const auto& e : j["layers"]) {
    if (!e.is_array() || e.size() != 2) {
      throw BadSpecError("layer spec: each layer must be [alpha, u]");
    }
    ls.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return rearrangement::DecreasingStep::make(std::move(ls));
}

json to_json(const rearrangement::Seq& a) { return {{"entries", a.entries}}; }

rearrangement::Seq seq_from_json(const json& j) {
  if (!j.is_object() || !j.contains("entries")) {
    throw BadSpecError("sequence spec: expected {\"entries\":[...]}");
  }
  rearrangement::Seq s;
  s.entries = j["entries"].get<std::vector<double>>();
  return s;
}

json to_json(const spectral::CMatrix& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.n; ++i) {
    json rrow = json::array(), irow = json::array();
    for (int j2 = 0; j2 < m.n; ++j2) {
      rrow.push_back(m.at(i, j2).real());
      irow.push_back(m.at(i, j2).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return {{"n", m.n}, {"re", re}, {"im", im}, {"hermitian", m.hermitian}};
}

spectral::CMatrix cmatrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re") || !j.contains("im")) {
    throw BadSpecError("matrix spec: expected {\"n\",\"re\",\"im\"[,\"hermitian\"]}");
  }
  int n = j["n"].get<int>();
  spectral::CMatrix m = spectral::CMatrix::zero(n);
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n) {
    throw BadSpecError("matrix spec: re/im row count differs from n");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[static_cast<size_t>(i)].size()) != n ||
        static_cast<int>(im[static_cast<size_t>(i)].size()) != n) {
      throw BadSpecError("matrix spec: ragged rows");
    }
    for (int k = 0; k < n; ++k) {
      m.at(i, k) = spectral::cdouble{
          re[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>(),
          im[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>()};
    }
  }
  m.hermitian = j.value("hermitian", false);
  return m;
}

json to_json(const report::ExperimentReport& r) {
  return {{"experiment", r.experiment}, {"corpus", r.corpus},
          {"samples", r.samples},       {"max", r.max},
          {"median", r.median},         {"min", r.min},
          {"pass", r.pass},             {"note", r.note},
          {"ms", r.ms}};
}

json to_json(const range::CriterionReport& r) {
  return {{"u_grid", r.u_grid},       {"g_values", r.g_values},
          {"phi_values", r.phi_values}, {"ratios", r.ratios},
          {"c_estimate", r.c_estimate}, {"verdict", range::to_string(r.verdict)},
          {"note", r.note}};
}

json to_json(const range::PsiTable& t) {
  return {{"u_grid", t.u_grid},
          {"psi", t.psi_values},
          {"w_star", t.minimizer_w},
          {"phi", to_json(t.phi)},
          {"repaired", t.repaired}};
}

json to_json(const harness::FreezeOutcome& f) {
  return {{"probe", f.probe},         {"recorded_now", f.recorded_now},
          {"pass", f.pass},           {"reference", f.reference},
          {"value", f.value},         {"note", f.note}};
}

json suite_to_json(const harness::SuiteResult& s, std::uint64_t seed) {
  json reports = json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  json freezes = json::array();
  for (const auto& f : s.freezes) freezes.push_back(to_json(f));
  return {{"seed", seed},
          {"reports", reports},
          {"freezes", freezes},
          {"all_pass", s.all_pass}};
}

std::string criterion_csv(const range::CriterionReport& r) {
  std::ostringstream os;
  os << "u,G,phi,ratio\n";
  for (size_t i = 0; i < r.u_grid.size(); ++i) {
    os << sig12(r.u_grid[i]) << ',' << sig12(r.g_values[i]) << ','
       << sig12(r.phi_values[i]) << ',' << sig12(r.ratios[i]) << '\n';
  }
  return os.str();
}

std::string experiment_csv(const report::ExperimentReport& r) {
  std::ostringstream os;
  os << "sample_id,value\n";
  for (size_t i = 0; i < r.samples.size(); ++i) {
    os << i << ',' << sig12(r.samples[i]) << '\n';
  }
  return os.str();
}

std::string psi_csv(const range::PsiTable& t) {
  std::ostringstream os;
  os << "u,psi,w_star\n";
  for (size_t i = 0; i < t.u_grid.size(); ++i) {
    os << sig12(t.u_grid[i]) << ',' << sig12(t.psi_values[i]) << ','
       << sig12(t.minimizer_w[i]) << '\n';
  }
  return os.str();
}

}  // namespace lorentzlab::json_io
