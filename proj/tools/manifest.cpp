#include "manifest.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vjface/error.hpp"

namespace vjface::cli {

namespace {

int parse_int(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (token.empty() || end != token.c_str() + token.size() || v < 0 || v > 1'000'000) {
    throw FormatError(line, "expected a non-negative integer, got '" + token + "'");
  }
  return static_cast<int>(v);
}

std::vector<double> parse_values(const std::string& token, std::size_t line) {
  std::vector<double> out;
  std::istringstream in(token);
  for (std::string item; std::getline(in, item, ',');) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw FormatError(line, "malformed vector component '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw FormatError(line, "empty vector");
  return out;
}

}  // namespace

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (std::size_t n = 1; std::getline(in, raw); ++n) {
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> t;
    for (std::string f; fields >> f;) t.push_back(f);
    if (t.empty()) continue;

    if (t[0] == "code") {
      if (t.size() != 3) throw FormatError(n, "expected 'code LABEL BITS'");
      try {
        m.codes.push_back(IdentityCode{t[1], parse_bits(t[2])});
      } catch (const FormatError& e) {
        throw FormatError(n, e.what());
      }
      continue;
    }

    ManifestEntry e;
    e.line = n;
    if (t[0] == "vector") {
      if (t.size() != 3) throw FormatError(n, "expected 'vector v1,...,vn LABEL'");
      e.is_vector = true;
      e.values = parse_values(t[1], n);
      e.label = t[2];
    } else if (t.size() == 3 && t[1] == "auto") {
      e.path = base_dir / t[0];
      e.label = t[2];
    } else if (t.size() == 6) {
      e.path = base_dir / t[0];
      e.face = Rect{parse_int(t[1], n), parse_int(t[2], n), parse_int(t[3], n), parse_int(t[4], n)};
      if (e.face->w < 1 || e.face->h < 1) throw FormatError(n, "face rect must be at least 1x1");
      e.label = t[5];
    } else {
      throw FormatError(n, "expected 'PATH x y w h LABEL', 'PATH auto LABEL' or 'vector ...'");
    }
    if (!m.entries.empty() && m.entries.front().is_vector != e.is_vector) {
      throw FormatError(n, "cannot mix vector rows and image rows in one gallery");
    }
    if (e.is_vector && !m.entries.empty() && m.entries.front().values.size() != e.values.size()) {
      throw FormatError(n, "vector rows differ in length");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open gallery manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

}  // namespace vjface::cli
