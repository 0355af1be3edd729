#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ncg/parallel.hpp"
#include "ncg/residue.hpp"

namespace ncg {

struct SuiteConfig {
  std::vector<int> dims{2, 4, 6};
  std::vector<TheoremId> theorems;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double tolerance = 1e-9;
  std::string format = "json";

  SuiteConfig() {
    for (const auto& t : theorem_table()) theorems.push_back(t.id);
  }

  void validate() const {
    if (dims.empty() || theorems.empty() || seeds.empty()) throw std::invalid_argument("empty suite configuration");
    for (int n : dims)
      if (n != 2 && n != 4 && n != 6 && n != 8)
        throw std::invalid_argument("suite dimension " + std::to_string(n) + " not in {2,4,6,8}");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (format != "json" && format != "csv" && format != "md")
      throw std::invalid_argument("format must be json, csv or md");
  }
};

// components uniform in [-1, 1]; the draw order is fixed so a seed means the same jets for every theorem
inline JetData random_jets(TheoremId id, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  JetData j = JetData::zeros(n);
  for (auto& x : j.f1) x = unif(rng);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) j.f2(a, b) = unif(rng);
  j.f2 = (0.5 * (j.f2 + j.f2.transpose())).eval();
  for (auto& x : j.u) x = unif(rng);
  for (auto& x : j.v) x = unif(rng);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) j.dv(a, b) = unif(rng);
  std::vector<double> x(n), y(n);
  for (auto& c : x) c = unif(rng);
  for (auto& c : y) c = unif(rng);
  AntisymTensor3 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) t.set(a, b, c, unif(rng));
  switch (info(id).perturbation) {
    case 0:
      j.perturbation = NoPerturbation{};
      break;
    case 1:
      j.perturbation = GradingPerturbation{};
      break;
    case 2:
      j.perturbation = VectorGrading{x};
      break;
    case 3:
      j.perturbation = TorsionGrading{t};
      break;
    default:
      j.perturbation = TorsionVector{t, y};
  }
  return j;
}

struct SkippedRun {
  std::string theorem;
  int n = 0;
  std::uint64_t seed = 0;
  std::string reason;
  friend bool operator==(const SkippedRun&, const SkippedRun&) = default;
};

struct SuiteResult {
  std::vector<VerificationRecord> records;
  std::vector<SkippedRun> skipped;

  bool all_ok() const {
    return std::none_of(records.begin(), records.end(),
                        [](const auto& r) { return r.status == Status::kMismatch; });
  }
};

inline std::size_t theorem_rank(const std::string& name) {
  const auto& t = theorem_table();
  for (std::size_t k = 0; k < t.size(); ++k)
    if (name == t[k].name) return k;
  return t.size();
}

template <class T>
void sort_by_key(std::vector<T>& v) {
  std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) {
    return std::make_tuple(theorem_rank(a.theorem), a.n, a.seed) < std::make_tuple(theorem_rank(b.theorem), b.n, b.seed);
  });
}

inline SuiteResult run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  struct Job {
    TheoremId id;
    int n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto id : cfg.theorems)
    for (int n : cfg.dims)
      for (auto s : cfg.seeds) jobs.push_back({id, n, s});

  std::vector<std::optional<VerificationRecord>> recs(jobs.size());
  std::vector<std::optional<SkippedRun>> skips(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto& job = jobs[k];
    const JetData jets = random_jets(job.id, job.n, job.seed);
    if (auto issue = validity_issue(job.id, job.n)) {
      std::string reason = *issue;
      try {
        reason += "; pipeline value " + format_complex(pipeline_value(job.id, build_rep(job.n), jets, cfg.tolerance));
      } catch (const std::exception&) {
      }
      skips[k] = SkippedRun{to_string(job.id), job.n, job.seed, reason};
      return;
    }
    recs[k] = compare(job.id, jets, cfg.tolerance, job.seed);
  });

  SuiteResult out;
  for (auto& r : recs)
    if (r) out.records.push_back(std::move(*r));
  for (auto& s : skips)
    if (s) out.skipped.push_back(std::move(*s));
  sort_by_key(out.records);
  sort_by_key(out.skipped);
  return out;
}

}  // namespace ncg
