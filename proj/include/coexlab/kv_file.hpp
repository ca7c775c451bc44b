#pragma once

#include <map>
#include <string>
#include <vector>

namespace coexlab {

// Flat key=value text format with optional [section] headers. '#' starts a
// comment, blank lines are ignored, keys and values are trimmed. Section ""
// holds keys seen before any header. Duplicate keys within a section are an
// error; section names may repeat in the file order they appear.
struct KvSection {
  std::string name;
  std::map<std::string, std::string> values;
};

std::vector<KvSection> parse_kv_file(const std::string& path);
std::vector<KvSection> parse_kv_text(const std::string& text, const std::string& origin);

double kv_double(const KvSection& section, const std::string& key);
std::int64_t kv_int(const KvSection& section, const std::string& key);
bool kv_bool(const KvSection& section, const std::string& key);

// Comma-separated list of doubles.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace coexlab
