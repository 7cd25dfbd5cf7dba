#include "pinndarts/io/metadata.hpp"

#include <cstdio>
#include <ostream>

#include "pinndarts/random.hpp"

namespace pinndarts {

void write_csv_preamble(std::ostream& out, const ArtifactMeta& meta, std::string_view format, int format_version) {
  out << "# pinndarts " << kLibraryVersion << " format=" << format << '/' << format_version
      << " config=" << meta.config_hash << '\n';
}

std::string content_hash(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

}  // namespace pinndarts
