#include "coexlab/kv_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coexlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<KvSection> parse_kv_text(const std::string& text, const std::string& origin) {
  std::vector<KvSection> sections;
  sections.push_back(KvSection{"", {}});
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      sections.push_back(KvSection{trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    auto& sec = sections.back();
    if (!sec.values.emplace(key, value).second)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return sections;
}

std::vector<KvSection> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str(), path);
}

double kv_double(const KvSection& section, const std::string& key) {
  const auto it = section.values.find(key);
  if (it == section.values.end()) throw std::runtime_error("missing key '" + key + "'");
  std::size_t pos = 0;
  double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) throw std::runtime_error("bad number for key '" + key + "': " + it->second);
  return v;
}

std::int64_t kv_int(const KvSection& section, const std::string& key) {
  const auto it = section.values.find(key);
  if (it == section.values.end()) throw std::runtime_error("missing key '" + key + "'");
  std::size_t pos = 0;
  long long v = std::stoll(it->second, &pos);
  if (pos != it->second.size()) throw std::runtime_error("bad integer for key '" + key + "': " + it->second);
  return v;
}

bool kv_bool(const KvSection& section, const std::string& key) {
  const auto it = section.values.find(key);
  if (it == section.values.end()) throw std::runtime_error("missing key '" + key + "'");
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::runtime_error("bad bool for key '" + key + "': " + it->second);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::runtime_error("empty item in list: " + text);
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::runtime_error("empty list");
  return out;
}

}  // namespace coexlab
