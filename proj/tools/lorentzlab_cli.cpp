// Command-line surface: every subcommand is a thin binding onto one library
// operation. Exit codes: 0 = pass, 1 = failed mathematical assertion,
// 2 = usage or malformed spec.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lorentzlab/calderon.hpp"
#include "lorentzlab/errors.hpp"
#include "lorentzlab/harness.hpp"
#include "lorentzlab/json_io.hpp"
#include "lorentzlab/optimal_range.hpp"
#include "lorentzlab/spectral.hpp"

namespace ll = lorentzlab;
using nlohmann::json;

namespace {

// Round every number to 12 significant digits so printed output matches the
// documented regression-freezing precision; deterministic by construction.
void round12(json& j) {
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", j.get<double>());
    j = std::stod(buf);
  } else if (j.is_array() || j.is_object()) {
    for (auto& e : j) round12(e);
  }
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return 0;
  }
  std::ofstream f(out_path);
  if (!f.good()) {
    std::cerr << "cannot write " << out_path << "\n";
    return 2;
  }
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
  return 0;
}

int emit_json(json j, const std::string& out_path) {
  round12(j);
  return emit(j.dump(2), out_path);
}

// Expands --config FILE (a JSON object mirroring the flags) into argv tokens
// placed directly after the subcommand, so explicit command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  }
  if (path.empty()) return args;
  if (args.empty()) throw ll::BadSpecError("--config requires a subcommand");
  std::ifstream in(path);
  if (!in.good()) throw ll::BadSpecError("cannot open config file " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ll::BadSpecError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ll::BadSpecError("config file must hold a JSON object");
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_string()) {
      extra.push_back(flag);
      extra.push_back(value.get<std::string>());
    } else {
      extra.push_back(flag);
      extra.push_back(value.dump());
    }
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

CLI::Option* opt(CLI::Option* o) {
  return o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

std::vector<double> cli_grid(double decades, int points_per_decade) {
  if (decades <= 0.0 || points_per_decade < 1) {
    throw ll::BadSpecError("grid: decades and points must be positive");
  }
  double half = decades / 2.0;
  int points = static_cast<int>(decades * points_per_decade) + 1;
  return ll::concave::geometric_grid(std::pow(10.0, -half), std::pow(10.0, half),
                                     points);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for Lorentz-space averaging operators"};
  app.require_subcommand(1);

  std::string phi_spec, psi_spec, x_spec, out_path, format = "json";
  std::string constants_path;
  double u = 0.0, decades = 8.0;
  bool have_u = false;
  int points = 8, n_max = 4096, dim = 0, samples = 0, threads = 0;
  std::uint64_t seed = 42;
  bool no_timing = false;

  auto add_common = [&](CLI::App* sub) {
    opt(sub->add_option("--out", out_path, "write output here instead of stdout"));
    opt(sub->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"})));
    opt(sub->add_option("--seed", seed, "corpus seed"));
  };

  auto* c_psi = app.add_subcommand("psi", "tabulate the induced range weight psi");
  opt(c_psi->add_option("--phi", phi_spec, "weight spec (inline JSON or file)"))->required();
  opt(c_psi->add_option("--u", u, "single evaluation point"))->trigger_on_parse(false);
  auto* u_opt = c_psi->get_option("--u");
  opt(c_psi->add_option("--decades", decades, "grid width in decades (centered at 1)"));
  opt(c_psi->add_option("--points", points, "grid points per decade"));
  add_common(c_psi);

  auto* c_cont = app.add_subcommand("check-continuous",
                                    "boundedness criterion on indicator images");
  opt(c_cont->add_option("--phi", phi_spec, "domain weight spec"))->required();
  opt(c_cont->add_option("--psi", psi_spec,
                         "range weight spec (default: derived table from phi)"));
  opt(c_cont->add_option("--decades", decades, "grid width in decades"));
  opt(c_cont->add_option("--points", points, "grid points per decade"));
  add_common(c_cont);

  auto* c_disc = app.add_subcommand("check-discrete", "sequence-space criterion");
  opt(c_disc->add_option("--phi", phi_spec, "weight spec"))->required();
  opt(c_disc->add_option("--n-max", n_max, "largest index probed (>= 64)"));
  add_common(c_disc);

  auto* c_wit = app.add_subcommand("witness", "domination witnesses");
  opt(c_wit->add_option("--phi", phi_spec, "weight spec"))->required();
  opt(c_wit->add_option("--u", u, "indicator witness for chi_(0,u) (default 1)"));
  opt(c_wit->add_option("--x", x_spec,
                        "layer spec {\"layers\":[[alpha,u],...]} for the "
                        "general dyadic witness"));
  add_common(c_wit);

  auto* c_hil = app.add_subcommand("hilbert",
                                   "Hilbert-transform domination over a corpus");
  opt(c_hil->add_option("--samples", samples, "corpus size (default 200)"));
  opt(c_hil->add_option("--points", points, "t-grid points per sample (default 32)"));
  add_common(c_hil);

  auto* c_phi0 = app.add_subcommand("phi0-check",
                                    "(L1+Linf) vs Lambda_phi0 sandwich over a corpus");
  opt(c_phi0->add_option("--samples", samples, "corpus size (default 200)"));
  add_common(c_phi0);

  auto* c_trunc = app.add_subcommand("truncate",
                                     "triangular-truncation probes on Gaussian matrices");
  opt(c_trunc->add_option("--dim", dim, "matrix dimension (default 64)"));
  opt(c_trunc->add_option("--samples", samples, "corpus size (default 50)"));
  add_common(c_trunc);

  auto* c_doi = app.add_subcommand("doi", "commutator identity through the "
                                          "divided-difference multiplier");
  opt(c_doi->add_option("--dim", dim, "matrix dimension (default 16)"));
  opt(c_doi->add_option("--samples", samples, "corpus size (default 100)"));
  add_common(c_doi);

  auto* c_suite = app.add_subcommand("suite", "run the full experiment suite");
  opt(c_suite->add_option("--threads", threads, "0 = hardware default, 1 = serial"));
  c_suite->add_flag("--no-timing", no_timing, "zero the ms fields (byte-stable output)");
  opt(c_suite->add_option("--constants", constants_path,
                          "frozen-constant ledger JSON (omit to skip freezing)"));
  opt(c_suite->add_option("--dim", dim, "matrix corpus dimension (default 64)"));
  opt(c_suite->add_option("--samples", samples, "matrix corpus size (default 50)"));
  add_common(c_suite);

  std::vector<std::string> args;
  try {
    args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  std::vector<const char*> cargv;
  cargv.push_back(argv[0]);
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  have_u = u_opt->count() > 0 || c_wit->get_option("--u")->count() > 0;

  try {
    if (c_psi->parsed()) {
      auto phi = ll::json_io::load_concave_spec(phi_spec);
      std::vector<double> us;
      if (u_opt->count() > 0) {
        us = {u};
      } else {
        us = cli_grid(decades, points);
      }
      json rows = {{"u_grid", json::array()},
                   {"psi", json::array()},
                   {"w_star", json::array()}};
      std::string csv = "u,psi,w_star\n";
      for (double uu : us) {
        auto p = ll::range::psi_from_phi(phi, uu);
        rows["u_grid"].push_back(uu);
        rows["psi"].push_back(p.value);
        rows["w_star"].push_back(p.w_star);
        char line[128];
        std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", uu, p.value,
                      p.w_star);
        csv += line;
      }
      return format == "csv" ? emit(csv, out_path) : emit_json(rows, out_path);
    }

    if (c_cont->parsed()) {
      auto phi = ll::json_io::load_concave_spec(phi_spec);
      ll::concave::ConcaveFn psi =
          psi_spec.empty() ? ll::range::default_psi_table(phi).fn
                           : ll::json_io::load_concave_spec(psi_spec);
      auto crit = ll::range::criterion_continuous(phi, psi, cli_grid(decades, points));
      int rc = crit.verdict == ll::range::Verdict::BoundedWithC ? 0 : 1;
      int erc = format == "csv" ? emit(ll::json_io::criterion_csv(crit), out_path)
                                : emit_json(ll::json_io::to_json(crit), out_path);
      return erc != 0 ? erc : rc;
    }

    if (c_disc->parsed()) {
      auto phi = ll::json_io::load_concave_spec(phi_spec);
      auto crit = ll::range::criterion_discrete(phi, n_max);
      int rc = crit.verdict == ll::range::Verdict::BoundedWithC ? 0 : 1;
      int erc = format == "csv" ? emit(ll::json_io::criterion_csv(crit), out_path)
                                : emit_json(ll::json_io::to_json(crit), out_path);
      return erc != 0 ? erc : rc;
    }

    if (c_wit->parsed()) {
      auto phi = ll::json_io::load_concave_spec(phi_spec);
      if (!x_spec.empty()) {
        json xj;
        {
          size_t first = x_spec.find_first_not_of(" \t\r\n");
          if (first != std::string::npos && x_spec[first] == '{') {
            xj = json::parse(x_spec, nullptr, true);
          } else {
            std::ifstream in(x_spec);
            if (!in.good()) throw ll::BadSpecError("cannot open " + x_spec);
            in >> xj;
          }
        }
        auto x = ll::json_io::decreasing_from_json(xj);
        auto wit = ll::range::witness_general(x, phi);
        json j = {{"y", ll::json_io::to_json(wit.y)},
                  {"norm_y_phi", wit.norm_y_phi},
                  {"norm_x_psi", wit.norm_x_psi},
                  {"ratio", wit.ratio},
                  {"min_slack", wit.min_slack},
                  {"domination_ok", wit.domination_ok},
                  {"factor8_ok", wit.factor8_ok}};
        int erc = emit_json(j, out_path);
        return erc != 0 ? erc : (wit.domination_ok && wit.factor8_ok ? 0 : 1);
      }
      double uu = have_u ? u : 1.0;
      auto wit = ll::range::witness_indicator(phi, uu);
      json j = {{"u", uu},
                {"w_used", wit.w_used},
                {"psi_u", wit.psi_u},
                {"norm_phi", wit.norm_phi},
                {"min_slack", wit.min_slack},
                {"domination_ok", wit.domination_ok},
                {"norm_ok", wit.norm_ok}};
      int erc = emit_json(j, out_path);
      return erc != 0 ? erc : (wit.domination_ok && wit.norm_ok ? 0 : 1);
    }

    if (c_hil->parsed()) {
      int n = samples > 0 ? samples : 200;
      int pts = points > 0 ? points : 32;
      ll::harness::CorpusSpec spec{ll::harness::CorpusKind::StepFunctions, seed,
                                   n, 16, 8, 6.0};
      auto corpus = ll::harness::gen_decreasing_steps(spec);
      std::vector<double> slacks;
      bool pass = true;
      for (size_t i = 0; i < corpus.size(); ++i) {
        auto grid = ll::harness::sample_t_grid(seed, i, pts, 1e-4, 1e4);
        auto rep = ll::calderon::check_hilbert_domination(corpus[i], grid);
        slacks.push_back(rep.min_slack);
        pass = pass && rep.passed;
      }
      auto rep = ll::report::summarize("hilbert_domination",
                                       ll::harness::describe(spec), slacks, pass,
                                       "min slack of |H chi(-t)| - S/(2 pi)");
      int erc = format == "csv" ? emit(ll::json_io::experiment_csv(rep), out_path)
                                : emit_json(ll::json_io::to_json(rep), out_path);
      return erc != 0 ? erc : (pass ? 0 : 1);
    }

    if (c_phi0->parsed()) {
      int n = samples > 0 ? samples : 200;
      ll::harness::CorpusSpec spec{ll::harness::CorpusKind::StepFunctions, seed,
                                   n, 16, 8, 6.0};
      auto corpus = ll::harness::gen_decreasing_steps(spec);
      std::vector<double> ratios;
      bool pass = true;
      for (const auto& x : corpus) {
        auto rep = ll::range::phi0_sandwich_check(x);
        ratios.push_back(rep.lorentz_phi0_norm / rep.image_norm);
        pass = pass && rep.passed;
      }
      auto rep = ll::report::summarize("phi0_sandwich",
                                       ll::harness::describe(spec), ratios, pass,
                                       "lorentz/image ratios; must sit in [1, 2]");
      int erc = format == "csv" ? emit(ll::json_io::experiment_csv(rep), out_path)
                                : emit_json(ll::json_io::to_json(rep), out_path);
      return erc != 0 ? erc : (pass ? 0 : 1);
    }

    if (c_trunc->parsed()) {
      int d = dim > 0 ? dim : 64;
      int n = samples > 0 ? samples : 50;
      ll::harness::CorpusSpec spec{ll::harness::CorpusKind::GaussianMatrices,
                                   seed, n, d, 8, 6.0};
      auto corpus = ll::harness::gen_gaussian_matrices(spec);
      auto phi = ll::concave::ConcaveFn::power(0.5);
      auto tab = ll::range::default_psi_table(phi);
      std::vector<double> weak;
      for (const auto& v : corpus) weak.push_back(ll::spectral::weak_l1_probe(v));
      auto res = ll::spectral::truncation_range_probe(corpus, phi, tab.fn);
      double weak_max = *std::max_element(weak.begin(), weak.end());
      bool pass = weak_max <= 10.0;
      auto rep1 = ll::report::summarize("weak_l1_truncation",
                                        ll::harness::describe(spec), weak, pass,
                                        "sup (n+1) mu_n(T V)/||V||_S1; ceiling 10");
      auto rep2 = ll::report::summarize(
          "truncation_range", ll::harness::describe(spec), res.norm_ratios, true,
          "||T V||_psi/||V||_phi for phi = power(0.5), psi derived");
      if (format == "csv") {
        int erc = emit(ll::json_io::experiment_csv(rep1), out_path);
        return erc != 0 ? erc : (pass ? 0 : 1);
      }
      json j = {{"weak_l1", ll::json_io::to_json(rep1)},
                {"truncation_range", ll::json_io::to_json(rep2)}};
      int erc = emit_json(j, out_path);
      return erc != 0 ? erc : (pass ? 0 : 1);
    }

    if (c_doi->parsed()) {
      int d = dim > 0 ? dim : 16;
      int n = samples > 0 ? samples : 100;
      ll::harness::CorpusSpec pspec{ll::harness::CorpusKind::HermitianPairs,
                                    seed, n, d, 8, 6.0};
      auto pairs = ll::harness::gen_hermitian_pairs(pspec);
      ll::harness::CorpusSpec fspec{ll::harness::CorpusKind::LipschitzFunctions,
                                    seed, n, d, 8, 6.0};
      auto fns = ll::harness::gen_lipschitz_functions(fspec);
      std::vector<double> scaled;
      bool pass = true;
      for (size_t i = 0; i < pairs.size(); ++i) {
        auto rep = ll::spectral::commutator_identity_check(fns[i], pairs[i].first,
                                                           pairs[i].second);
        scaled.push_back(rep.deviation / rep.scale);
        pass = pass && rep.ok;
      }
      auto rep = ll::report::summarize("doi_commutator_identity",
                                       ll::harness::describe(pspec), scaled, pass,
                                       "deviation/scale; bound 1e-10");
      int erc = format == "csv" ? emit(ll::json_io::experiment_csv(rep), out_path)
                                : emit_json(ll::json_io::to_json(rep), out_path);
      return erc != 0 ? erc : (pass ? 0 : 1);
    }

    if (c_suite->parsed()) {
      ll::harness::SuiteConfig cfg;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.timing = !no_timing;
      cfg.constants_path = constants_path;
      if (dim > 0) cfg.matrix_dim = dim;
      if (samples > 0) cfg.matrix_samples = samples;
      auto res = ll::harness::run_suite(cfg);
      if (format == "csv") {
        std::string csv = "experiment,sample_id,value\n";
        for (const auto& r : res.reports) {
          for (size_t i = 0; i < r.samples.size(); ++i) {
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%zu,%.12g\n",
                          r.experiment.c_str(), i, r.samples[i]);
            csv += line;
          }
        }
        int erc = emit(csv, out_path);
        return erc != 0 ? erc : (res.all_pass ? 0 : 1);
      }
      int erc = emit_json(ll::json_io::suite_to_json(res, cfg.seed), out_path);
      return erc != 0 ? erc : (res.all_pass ? 0 : 1);
    }
  } catch (const ll::BadSpecError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
