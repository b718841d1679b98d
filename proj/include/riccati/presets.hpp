// Loading surfaces, representations and Schottky systems from preset files.
//
// A name resolves first as a file path, then as a shipped preset with the
// matching extension (.surface, .rep, .schottky). File grammar: see
// keyvalue.hpp and the files under data/presets.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "riccati/cocycle.hpp"
#include "riccati/keyvalue.hpp"
#include "riccati/schottky.hpp"
#include "riccati/surface.hpp"

namespace riccati {

class PresetNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Names of the shipped presets, with extensions.
std::vector<std::string> preset_names();

/// Text of a file path or a shipped preset `<name><extension>`; the source
/// label is written to `source`.
std::string preset_text(const std::string& name_or_path, const std::string& extension,
                        std::string* source = nullptr);

SurfaceGroup parse_surface(const KeyValueFile& kv);
/// `n` and `image.<i>`.
Representation parse_representation(const KeyValueFile& kv);
PingPongSystem parse_schottky(const KeyValueFile& kv);

SurfaceGroup load_surface(const std::string& name_or_path);
/// Also accepts the keywords "canonical" (covering representation of G) and
/// "trivial" (identity images in dimension 2).
Representation load_representation(const std::string& name_or_path, const SurfaceGroup& G);
PingPongSystem load_schottky(const std::string& name_or_path);

}  // namespace riccati
