#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cardinal.hpp"
#include "classify.hpp"
#include "morphism.hpp"
#include "multimap.hpp"
#include "space.hpp"
#include "tower.hpp"

namespace uc {

using Json = nlohmann::json;

// Cardinals travel as strings: "3", "aleph0", "aleph1", ...
Json cardinal_to_json(const Cardinal& c);
Cardinal cardinal_from_json(const Json& j);

// {"prefix": ["3", "aleph0"], "tail": {"kind": "constant", "value": "2"}}
// or tail {"kind": "unbounded_finite"}.
Json cardinal_seq_to_json(const CardinalSeq& s);
CardinalSeq cardinal_seq_from_json(const Json& j);

// {"points": ["a", ...], "dist": [["0", "1", ...], ...]} with rational
// entries "p/q" or integer strings.
Json space_to_json(const FiniteUltraSpace& X);
FiniteUltraSpace space_from_json(const Json& j);

// Auto-detects the two space flavors: a finite table ("points"/"dist") or a
// degree sequence ("prefix"/"tail").
SpaceSpec space_spec_from_json(const Json& j);
Json space_spec_to_json(const SpaceSpec& spec);

// {"depth": N, "levels": [[ids], ...], "up": {"child": "parent"},
//  "labels": {"id": {"members": [...], "radius": "r"}}}
Json tower_to_json(const ExplicitTower& T);
ExplicitTower tower_from_json(const Json& j);

// One rank per level, edges child -> parent, leaves at rank 0.
std::string tower_to_dot(const ExplicitTower& T);

// {"pairs": [["x", "p"], ...]}
Json multimap_to_json(const MultiMap& R);
std::vector<std::pair<std::string, std::string>> pairs_from_json(
    const Json& j);

Json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

// ["aleph0", "aleph0"]: flat then sharp.
Json invariant_pair_to_json(const InvariantPair& inv);

Json verdict_to_json(const Verdict& v);

// Explicit maps dump the full table; lazy maps dump the evaluated fragment
// plus its expansion depth.
Json tower_map_to_json(const TowerMap& phi);

// Canonical text form used everywhere output must be byte-stable.
std::string dump_json(const Json& j);

Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace uc
