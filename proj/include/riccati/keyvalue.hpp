// Plain-text key-value files used for presets.
//
//   # comment
//   key = value          (whitespace around '=' ignored)
//
// Keys are unique. Values are kept verbatim; helpers parse numbers, ideal
// points ("inf" or a real) and JSON matrix literals [[[re, im], ...], ...].
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "riccati/moebius.hpp"

namespace riccati {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyValueFile {
 public:
  KeyValueFile(const std::string& text, std::string source);

  const std::string& source() const { return source_; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  /// Throws ParseError naming the file when the key is missing.
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> keys() const;
  /// Keys of the form prefix.<index>, sorted by the integer index.
  std::vector<std::pair<int, std::string>> indexed(const std::string& prefix) const;

 private:
  std::string source_;
  std::map<std::string, std::string> entries_;
};

std::vector<std::string> split_whitespace(const std::string& s);
double parse_real(const std::string& s, const std::string& what);
/// "inf" (any sign or case) is the ideal point at infinity.
double parse_ideal_point(const std::string& s, const std::string& what);
long parse_int(const std::string& s, const std::string& what);
/// Row-major matrix; entries are [re, im] pairs or plain reals.
CMatrix parse_matrix(const std::string& s, const std::string& what);
/// A point of CP^1: [re, im], a real, or "inf".
SpherePoint parse_sphere_point_json(const std::string& s, const std::string& what);

}  // namespace riccati
