#include "riccati/keyvalue.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace riccati {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

Complex json_complex(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(what + ": expected a number or [re, im], got " + j.dump());
}

}  // namespace

KeyValueFile::KeyValueFile(const std::string& text, std::string source) : source_(std::move(source)) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(source_ + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(source_ + ":" + std::to_string(lineno) + ": empty key");
    if (!entries_.emplace(key, value).second)
      throw ParseError(source_ + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
}

const std::string& KeyValueFile::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ParseError(source_ + ": missing key '" + key + "'");
  return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::vector<std::string> KeyValueFile::keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : entries_) out.push_back(key);
  return out;
}

std::vector<std::pair<int, std::string>> KeyValueFile::indexed(const std::string& prefix) const {
  std::vector<std::pair<int, std::string>> out;
  const std::string head = prefix + ".";
  for (const auto& [key, value] : entries_) {
    if (key.rfind(head, 0) != 0) continue;
    const std::string idx = key.substr(head.size());
    out.emplace_back(static_cast<int>(parse_int(idx, source_ + ": key '" + key + "'")), value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> split_whitespace(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(what + ": '" + s + "' is not a number");
}

double parse_ideal_point(const std::string& s, const std::string& what) {
  const std::string l = lower(s);
  if (l == "inf" || l == "+inf" || l == "-inf" || l == "infinity")
    return std::numeric_limits<double>::infinity();
  return parse_real(s, what);
}

long parse_int(const std::string& s, const std::string& what) {
  long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ParseError(what + ": '" + s + "' is not an integer");
  return v;
}

CMatrix parse_matrix(const std::string& s, const std::string& what) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": malformed matrix literal (" + e.what() + ")");
  }
  if (!j.is_array() || j.empty()) throw ParseError(what + ": matrix must be a list of rows");
  const auto n = static_cast<int>(j.size());
  if (n > kMaxDim) throw ParseError(what + ": matrix larger than " + std::to_string(kMaxDim));
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw ParseError(what + ": matrix must be square");
    for (int c = 0; c < n; ++c) m(r, c) = json_complex(j[r][c], what);
  }
  return m;
}

SpherePoint parse_sphere_point_json(const std::string& s, const std::string& what) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": malformed point (" + e.what() + ")");
  }
  if (j.is_string()) {
    if (std::isinf(parse_ideal_point(j.get<std::string>(), what))) return SpherePoint::infinity();
    throw ParseError(what + ": unknown point " + j.dump());
  }
  return SpherePoint::affine(json_complex(j, what));
}

}  // namespace riccati
