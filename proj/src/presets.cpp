#include "riccati/presets.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "riccati/embedded_presets.hpp"

namespace riccati {

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : embedded::kPresets) out.emplace_back(name);
  return out;
}

std::string preset_text(const std::string& name_or_path, const std::string& extension,
                        std::string* source) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(name_or_path, ec)) {
    std::ifstream in(name_or_path);
    if (!in) throw PresetNotFound("cannot read " + name_or_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (source) *source = name_or_path;
    return ss.str();
  }
  const std::string wanted = name_or_path + extension;
  for (const auto& [name, text] : embedded::kPresets)
    if (name == wanted || name == name_or_path) {
      if (source) *source = "preset:" + std::string(name);
      return std::string(text);
    }
  std::string known;
  for (const auto& [name, text] : embedded::kPresets)
    if (std::string_view(name).ends_with(extension))
      known += " " + std::string(name.substr(0, name.size() - extension.size()));
  throw PresetNotFound("no file or preset named '" + name_or_path + "' (presets:" + known + ")");
}

namespace {

RealMoebius real_generator(const CMatrix& m, const std::string& what) {
  if (m.rows() != 2) throw ParseError(what + ": generators are 2 x 2");
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (m(r, c).imag() != 0.0) throw ParseError(what + ": generators must be real");
  return RealMoebius::normalized(m(0, 0).real(), m(0, 1).real(), m(1, 0).real(), m(1, 1).real());
}

template <class T>
std::vector<T> dense(const std::vector<std::pair<int, T>>& items, int first,
                     const std::string& what) {
  std::vector<T> out;
  for (const auto& [idx, value] : items) {
    if (idx != first + static_cast<int>(out.size()))
      throw ParseError(what + ": indices must run " + std::to_string(first) + ", " +
                       std::to_string(first + 1) + ", ... without gaps");
    out.push_back(value);
  }
  return out;
}

Disc parse_disc(const std::string& text, const std::string& what) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": malformed disc (" + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("boundary") || !j.contains("witness") ||
      !j["boundary"].is_array() || j["boundary"].size() != 3)
    throw ParseError(what + ": disc needs {\"boundary\": [p, p, p], \"witness\": p}");
  SpherePoint b[3];
  for (int i = 0; i < 3; ++i) b[i] = parse_sphere_point_json(j["boundary"][i].dump(), what);
  const SpherePoint w = parse_sphere_point_json(j["witness"].dump(), what);
  try {
    return Disc(b[0], b[1], b[2], w, 1e-9);
  } catch (const NumericalError& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace

SurfaceGroup parse_surface(const KeyValueFile& kv) {
  const std::string& src = kv.source();
  std::vector<std::pair<int, RealMoebius>> gens;
  for (const auto& [i, text] : kv.indexed("generator")) {
    const std::string what = src + ": generator." + std::to_string(i);
    gens.emplace_back(i, real_generator(parse_matrix(text, what), what));
  }
  std::vector<std::pair<int, PolygonSide>> sides;
  for (const auto& [j, text] : kv.indexed("side")) {
    const std::string what = src + ": side." + std::to_string(j);
    const auto tok = split_whitespace(text);
    if (tok.size() != 4) throw ParseError(what + ": expected 'p q letter partner'");
    PolygonSide s;
    s.p = parse_ideal_point(tok[0], what);
    s.q = parse_ideal_point(tok[1], what);
    s.letter = static_cast<int>(parse_int(tok[2], what));
    s.partner = static_cast<int>(parse_int(tok[3], what));
    sides.emplace_back(j, s);
  }
  std::vector<std::pair<int, CuspVertex>> cusps;
  for (const auto& [k, text] : kv.indexed("cusp")) {
    const std::string what = src + ": cusp." + std::to_string(k);
    const auto tok = split_whitespace(text);
    if (tok.size() < 2) throw ParseError(what + ": expected 'vertex letter...'");
    CuspVertex c;
    c.vertex = parse_ideal_point(tok[0], what);
    std::vector<int> letters;
    for (std::size_t i = 1; i < tok.size(); ++i) letters.push_back(static_cast<int>(parse_int(tok[i], what)));
    c.peripheral = Word(letters);
    cusps.emplace_back(k, c);
  }
  const auto bp = split_whitespace(kv.get("base_point"));
  if (bp.size() != 2) throw ParseError(src + ": base_point expects 'x y'");
  const Complex base(parse_real(bp[0], src + ": base_point"), parse_real(bp[1], src + ": base_point"));
  try {
    return SurfaceGroup(kv.get_or("name", src), dense(gens, 1, src + ": generator"),
                        dense(sides, 0, src + ": side"), dense(cusps, 0, src + ": cusp"), base);
  } catch (const std::invalid_argument& e) {
    throw ParseError(src + ": " + e.what());
  } catch (const NumericalError& e) {
    throw ParseError(src + ": " + e.what());
  }
}

Representation parse_representation(const KeyValueFile& kv) {
  const std::string& src = kv.source();
  const long n = parse_int(kv.get("n"), src + ": n");
  std::vector<std::pair<int, CMatrix>> images;
  for (const auto& [i, text] : kv.indexed("image")) {
    const std::string what = src + ": image." + std::to_string(i);
    CMatrix m = parse_matrix(text, what);
    if (m.rows() != n) throw ParseError(what + ": expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    images.emplace_back(i, m);
  }
  try {
    return Representation(kv.get_or("name", src), dense(images, 1, src + ": image"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(src + ": " + e.what());
  } catch (const NumericalError& e) {
    throw ParseError(src + ": " + e.what());
  }
}

PingPongSystem parse_schottky(const KeyValueFile& kv) {
  const std::string& src = kv.source();
  PingPongSystem sys;
  sys.name = kv.get_or("name", src);
  std::vector<std::pair<int, ProjectiveMap>> maps;
  for (const auto& [i, text] : kv.indexed("map")) {
    const std::string what = src + ": map." + std::to_string(i);
    const CMatrix m = parse_matrix(text, what);
    if (m.rows() != 2) throw ParseError(what + ": Schottky maps are 2 x 2");
    try {
      maps.emplace_back(i, ProjectiveMap(m));
    } catch (const NumericalError& e) {
      throw ParseError(what + ": " + e.what());
    }
  }
  sys.maps = dense(maps, 1, src + ": map");
  for (const char* side : {"A", "B"}) {
    std::vector<std::pair<int, Disc>> discs;
    for (const auto& [i, text] : kv.indexed(side))
      discs.emplace_back(i, parse_disc(text, src + ": " + side + "." + std::to_string(i)));
    (side[0] == 'A' ? sys.A : sys.B) = dense(discs, 1, src + ": " + side);
  }
  if (sys.A.size() != sys.maps.size() || sys.B.size() != sys.maps.size())
    throw ParseError(src + ": every map.<i> needs discs A.<i> and B.<i>");
  return sys;
}

SurfaceGroup load_surface(const std::string& name_or_path) {
  std::string source;
  const std::string text = preset_text(name_or_path, ".surface", &source);
  return parse_surface(KeyValueFile(text, source));
}

Representation load_representation(const std::string& name_or_path, const SurfaceGroup& G) {
  if (name_or_path == "canonical") return Representation::canonical(G);
  if (name_or_path == "trivial") return Representation::trivial(2, G.rank());
  std::string source;
  const std::string text = preset_text(name_or_path, ".rep", &source);
  Representation rho = parse_representation(KeyValueFile(text, source));
  if (rho.rank() != G.rank())
    throw ParseError(source + ": " + std::to_string(rho.rank()) + " images for a rank-" +
                     std::to_string(G.rank()) + " surface group");
  return rho;
}

PingPongSystem load_schottky(const std::string& name_or_path) {
  std::string source;
  const std::string text = preset_text(name_or_path, ".schottky", &source);
  return parse_schottky(KeyValueFile(text, source));
}

}  // namespace riccati
