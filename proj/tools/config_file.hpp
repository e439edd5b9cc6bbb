#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vjface::cli {

/// Invalid invocation: bad flags, bad config keys or values. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` lines, `#` starts a comment. Keys outside `allowed` are
/// rejected.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text, const std::set<std::string>& allowed,
                              const std::string& origin = "config");
  static KeyValueConfig load(const std::filesystem::path& path,
                             const std::set<std::string>& allowed);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

}  // namespace vjface::cli
