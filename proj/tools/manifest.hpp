#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vjface/image.hpp"
#include "vjface/recognizer.hpp"

namespace vjface::cli {

/// One gallery line. Image entries carry a path and either a face rect or
/// none (`auto`: ask the detector); vector entries carry raw values.
struct ManifestEntry {
  std::size_t line = 0;
  std::filesystem::path path;
  std::optional<Rect> face;
  std::vector<double> values;
  bool is_vector = false;
  std::string label;
};

/// Line formats (blank lines and `#` comments ignored):
///   PATH x y w h LABEL
///   PATH auto LABEL
///   vector v1,v2,...,vn LABEL
///   code LABEL BITS          explicit identity code, in enrollment order
/// Relative paths resolve against the manifest's directory.
struct Manifest {
  std::vector<ManifestEntry> entries;
  std::vector<IdentityCode> codes;

  bool vector_mode() const { return !entries.empty() && entries.front().is_vector; }
};

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace vjface::cli
