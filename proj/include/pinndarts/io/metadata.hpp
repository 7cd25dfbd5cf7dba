#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace pinndarts {

inline constexpr std::string_view kLibraryVersion = "1.0.0";

// Identifies the configuration an artifact came from. Written as the first
// line of every CSV:  # pinndarts 1.0.0 format=<name>/<version> config=<hash>
struct ArtifactMeta {
  std::string config_hash = "none";
};

void write_csv_preamble(std::ostream& out, const ArtifactMeta& meta, std::string_view format, int format_version);

// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string content_hash(std::string_view text);

}  // namespace pinndarts
