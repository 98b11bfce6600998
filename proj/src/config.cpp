#include "spinrl/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

Config Config::from_string(const std::string& text,
                           const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash_pos = raw.find('#');
    const std::string line =
        trim(hash_pos == std::string::npos ? raw : raw.substr(0, hash_pos));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, line_no, "expected `key = value`, got `" + line + "`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (cfg.entries_.count(key))
      fail(origin, line_no,
           "duplicate key `" + key + "` (first at line " +
               std::to_string(cfg.entries_[key].line) + ")");
    cfg.entries_[key] = Entry{value, line_no, false};
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, 0, false};
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  return it->second.value;
}

double Config::get_double(const std::string& key, double fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(it->second.value, &used);
  } catch (const std::exception&) {
    fail(origin_, it->second.line, "key `" + key + "`: not a number: `" +
                                       it->second.value + "`");
  }
  if (used != it->second.value.size())
    fail(origin_, it->second.line,
         "key `" + key + "`: trailing characters in `" + it->second.value + "`");
  return v;
}

int Config::get_int(const std::string& key, int fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(it->second.value, &used);
  } catch (const std::exception&) {
    fail(origin_, it->second.line, "key `" + key + "`: not an integer: `" +
                                       it->second.value + "`");
  }
  if (used != it->second.value.size())
    fail(origin_, it->second.line,
         "key `" + key + "`: trailing characters in `" + it->second.value + "`");
  return static_cast<int>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(it->second.value, &used);
  } catch (const std::exception&) {
    fail(origin_, it->second.line, "key `" + key + "`: not an integer: `" +
                                       it->second.value + "`");
  }
  if (used != it->second.value.size())
    fail(origin_, it->second.line,
         "key `" + key + "`: trailing characters in `" + it->second.value + "`");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  const std::string& v = it->second.value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(origin_, it->second.line, "key `" + key + "`: not a boolean: `" + v + "`");
}

std::vector<std::string> Config::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_)
    if (!entry.consumed)
      out.push_back(key + " (line " + std::to_string(entry.line) + ")");
  return out;
}

void Config::require_fully_consumed() const {
  const std::vector<std::string> leftover = unconsumed();
  if (leftover.empty()) return;
  std::ostringstream os;
  os << origin_ << ": unknown key";
  if (leftover.size() > 1) os << "s";
  os << ":";
  for (const std::string& k : leftover) os << " " << k << ";";
  throw std::runtime_error(os.str());
}

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& [key, entry] : entries_)
    os << key << " = " << entry.value << "\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

}  // namespace spinrl
