#pragma once

#include <iosfwd>
#include <vector>

#include "pinndarts/io/metadata.hpp"
#include "pinndarts/search/strategies.hpp"

namespace pinndarts {

struct CorrelationStudy {
  // One record per (width code, depth, seed), widths outermost.
  std::vector<EvalRecord> records;
  // Spearman coefficient between test loss and relative L2 over the
  // records that trained without numerical failure.
  double coefficient = 0.0;
};

CorrelationStudy correlation_study(const std::vector<int>& width_codes, const std::vector<std::size_t>& depths,
                                   const std::vector<std::uint64_t>& seeds, const Evaluator& evaluate,
                                   std::size_t workers = 1);

// Rows loss,error,architecture,seed (failed runs omitted).
void write_scatter_csv(std::ostream& out, const CorrelationStudy& study, const ArtifactMeta& meta);

}  // namespace pinndarts
