#include "pinndarts/metrics/correlation.hpp"

#include <cstdio>
#include <ostream>

#include "pinndarts/metrics/metrics.hpp"
#include "pinndarts/search/pool.hpp"

namespace pinndarts {

CorrelationStudy correlation_study(const std::vector<int>& width_codes, const std::vector<std::size_t>& depths,
                                   const std::vector<std::uint64_t>& seeds, const Evaluator& evaluate,
                                   std::size_t workers) {
  struct Job {
    ArchitectureSpec spec;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int code : width_codes)
    for (std::size_t depth : depths)
      for (auto seed : seeds) jobs.push_back({ArchitectureSpec::even(code, depth), seed});
  CorrelationStudy study;
  study.records.resize(jobs.size());
  run_jobs(jobs.size(), workers, [&](std::size_t i) { study.records[i] = evaluate(jobs[i].spec, jobs[i].seed); });
  std::vector<double> losses, errors;
  for (const auto& r : study.records) {
    if (r.failed) continue;
    losses.push_back(r.test_loss);
    errors.push_back(r.relative_l2);
  }
  study.coefficient = spearman(losses, errors);
  return study;
}

void write_scatter_csv(std::ostream& out, const CorrelationStudy& study, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "correlation-scatter", 1);
  out << "loss,error,architecture,seed\n";
  char buf[128];
  for (const auto& r : study.records) {
    if (r.failed) continue;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.test_loss, r.relative_l2);
    out << buf << '"' << r.spec.to_string() << "\"," << r.seed << '\n';
  }
}

}  // namespace pinndarts
