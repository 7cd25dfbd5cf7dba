#include "pinndarts/search/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace pinndarts {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json report_to_json(const SearchReport& report, const nlohmann::json& context) {
  nlohmann::json j;
  j["format"] = "pinndarts-search-report";
  j["format_version"] = kReportFormatVersion;
  j["library_version"] = std::string(kLibraryVersion);
  j["method"] = report.method;
  j["problem"] = report.problem;
  j["context"] = context;
  j["mean_relative_l2"] = finite_or_null(report.mean_error);
  j["failed_seeds"] = report.failed_seeds();
  auto& seeds = j["seeds"] = nlohmann::json::array();
  for (const auto& s : report.seeds) {
    nlohmann::json e;
    e["seed"] = s.seed;
    e["status"] = s.failed ? "failed" : "ok";
    if (s.failed) e["error"] = s.error;
    e["architecture"] = s.spec.to_string();
    e["test_loss"] = finite_or_null(s.test_loss);
    e["relative_l2"] = finite_or_null(s.relative_l2);
    e["evaluations"] = s.evaluations;
    if (!s.stop_reason.empty()) {
      e["search_iterations"] = s.search_iterations;
      e["stop_reason"] = s.stop_reason;
    }
    if (!s.evaluated.empty()) {
      auto& ev = e["evaluated"] = nlohmann::json::array();
      for (const auto& spec : s.evaluated) ev.push_back(spec.to_string());
    }
    seeds.push_back(std::move(e));
  }
  return j;
}

void write_report_json(std::ostream& out, const SearchReport& report, const nlohmann::json& context) {
  out << report_to_json(report, context).dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const SearchReport& report, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "search-report", kReportFormatVersion);
  out << "method,problem,seed,architecture,test_loss,relative_l2,evaluations,search_iterations,stop_reason,status\n";
  for (const auto& s : report.seeds) {
    out << report.method << ',' << report.problem << ',' << s.seed << ",\"" << s.spec.to_string() << "\","
        << number(s.test_loss) << ',' << number(s.relative_l2) << ',' << s.evaluations << ',' << s.search_iterations
        << ',' << s.stop_reason << ',' << (s.failed ? "failed" : "ok") << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const SearchSpace& space, const WidthTable& widths,
                       std::span<const double> mean_error, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "heatmap", kReportFormatVersion);
  out << "width";
  for (std::size_t d = 1; d <= space.max_depth; ++d) out << ",depth_" << d;
  out << '\n';
  for (int code = 1; code <= 4; ++code) {
    out << widths.width(code);
    for (std::size_t d = 1; d <= space.max_depth; ++d) out << ',' << number(mean_error[space.index_of(code, d)]);
    out << '\n';
  }
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "comparison", kReportFormatVersion);
  out << "method,mean_relative_l2,search_seconds,error_ratio_percent,failed_seeds\n";
  for (const auto& r : rows) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
    out << r.method << ',' << number(r.mean_error) << ',' << secs << ',' << number(r.error_ratio) << ','
        << r.failed_seeds << '\n';
  }
}

}  // namespace pinndarts
