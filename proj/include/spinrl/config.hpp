#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spinrl {

// Flat key=value configuration. One `section.key = value` entry per line,
// `#` starts a comment, blank lines are skipped. Every read marks its key
// as consumed so typos can be reported with their line numbers afterwards.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text,
                            const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);

  // CLI overrides; counts as a file entry with line 0.
  void set(const std::string& key, const std::string& value);

  // Keys that were present but never read, formatted "key (line N)".
  std::vector<std::string> unconsumed() const;
  // Throws listing every unconsumed key; call after all gets are done.
  void require_fully_consumed() const;

  // Sorted, normalized `key = value` text and its FNV-1a 64-bit hash; the
  // hash is recorded with run outputs so results trace back to the exact
  // configuration.
  std::string canonical() const;
  std::uint64_t hash() const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
  };
  std::map<std::string, Entry> entries_;
  std::string origin_ = "<empty>";
};

std::uint64_t fnv1a64(const std::string& text);

}  // namespace spinrl
