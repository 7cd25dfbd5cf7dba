#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"
#include "pinndarts/io/metadata.hpp"
#include "pinndarts/search/strategies.hpp"

namespace pinndarts {

inline constexpr int kReportFormatVersion = 1;

// Report without timings so reruns compare byte for byte. `context` is
// embedded verbatim (problem settings, sample allocation, config hash).
nlohmann::json report_to_json(const SearchReport& report, const nlohmann::json& context);
void write_report_json(std::ostream& out, const SearchReport& report, const nlohmann::json& context);
// One row per seed.
void write_report_csv(std::ostream& out, const SearchReport& report, const ArtifactMeta& meta);

// Seed-averaged error table: one row per width code, one column per depth.
void write_heatmap_csv(std::ostream& out, const SearchSpace& space, const WidthTable& widths,
                       std::span<const double> mean_error, const ArtifactMeta& meta);

struct ComparisonRow {
  std::string method;
  double mean_error = 0.0;
  double seconds = 0.0;
  double error_ratio = 0.0;  // percent of the grid mean error; NaN without a grid run
  std::size_t failed_seeds = 0;
};
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows, const ArtifactMeta& meta);

}  // namespace pinndarts
