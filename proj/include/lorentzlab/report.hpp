#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace lorentzlab::report {

// One experiment's worth of per-sample values plus summary statistics and a
// pass flag. Failures are data here, not exceptions: a suite always finishes
// and CI asserts on the aggregate.
struct ExperimentReport {
  std::string experiment;
  std::string corpus;
  std::vector<double> samples;
  double max = 0.0;
  double median = 0.0;
  double min = 0.0;
  bool pass = true;
  std::string note;
  double ms = 0.0;
};

inline ExperimentReport summarize(std::string experiment, std::string corpus,
                                  std::vector<double> samples, bool pass,
                                  std::string note = "") {
  ExperimentReport r;
  r.experiment = std::move(experiment);
  r.corpus = std::move(corpus);
  r.samples = std::move(samples);
  r.pass = pass;
  r.note = std::move(note);
  if (!r.samples.empty()) {
    std::vector<double> s = r.samples;
    std::sort(s.begin(), s.end());
    r.min = s.front();
    r.max = s.back();
    size_t n = s.size();
    r.median = (n % 2 == 1) ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
  }
  return r;
}

}  // namespace lorentzlab::report
