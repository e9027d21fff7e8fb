#include "json_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"
#include "rational.hpp"

namespace uc {
namespace {

const Json& require_field(const Json& j, const char* key,
                          const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    fail_input(std::string(context) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

std::string require_string(const Json& j, const char* context) {
  if (!j.is_string()) fail_input(std::string(context) + ": expected a string");
  return j.get<std::string>();
}

std::vector<ModulusRow> modulus_table_from_json(const Json& j,
                                                const char* context) {
  if (!j.is_array()) fail_input(std::string(context) + ": expected an array");
  std::vector<ModulusRow> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2) {
      fail_input(std::string(context) + ": rows must be [eps, omega] pairs");
    }
    rows.push_back({parse_rational(require_string(row[0], context)),
                    parse_rational(require_string(row[1], context))});
  }
  return rows;
}

Json modulus_table_to_json(const std::vector<ModulusRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({format_rational(r.eps), format_rational(r.omega)});
  }
  return out;
}

std::vector<std::string> string_list_from_json(const Json& j,
                                               const char* context) {
  if (!j.is_array()) fail_input(std::string(context) + ": expected an array");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(require_string(e, context));
  return out;
}

std::string tnode_key(const TowerRef& tower, const TNode& x) {
  return tower.node_id(x);
}

}  // namespace

Json cardinal_to_json(const Cardinal& c) { return c.str(); }

Cardinal cardinal_from_json(const Json& j) {
  auto text = require_string(j, "cardinal");
  auto c = Cardinal::parse(text);
  if (!c) fail_input("unrecognized cardinal \"" + text + "\"");
  return *c;
}

Json cardinal_seq_to_json(const CardinalSeq& s) {
  Json prefix = Json::array();
  for (const auto& c : s.prefix()) prefix.push_back(cardinal_to_json(c));
  Json tail;
  if (s.tail_is_constant()) {
    tail = {{"kind", "constant"},
            {"value", cardinal_to_json(s.constant_tail_value())}};
  } else {
    tail = {{"kind", "unbounded_finite"}};
  }
  return {{"prefix", std::move(prefix)}, {"tail", std::move(tail)}};
}

CardinalSeq cardinal_seq_from_json(const Json& j) {
  const auto& jprefix = require_field(j, "prefix", "degree sequence");
  if (!jprefix.is_array()) fail_input("degree sequence: prefix must be an array");
  std::vector<Cardinal> prefix;
  for (const auto& e : jprefix) prefix.push_back(cardinal_from_json(e));
  const auto& jtail = require_field(j, "tail", "degree sequence");
  auto kind = require_string(require_field(jtail, "kind", "degree sequence tail"),
                             "degree sequence tail kind");
  if (kind == "constant") {
    auto value = cardinal_from_json(
        require_field(jtail, "value", "constant tail"));
    return CardinalSeq(std::move(prefix), CardinalSeq::ConstantTail{value});
  }
  if (kind == "unbounded_finite") {
    return CardinalSeq::unbounded_finite(std::move(prefix));
  }
  fail_input("unknown tail kind \"" + kind + "\"");
}

Json space_to_json(const FiniteUltraSpace& X) {
  Json points = Json::array();
  for (const auto& p : X.points()) points.push_back(p);
  Json dist = Json::array();
  for (std::size_t i = 0; i < X.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < X.size(); ++j) {
      row.push_back(format_rational(X.dist(i, j)));
    }
    dist.push_back(std::move(row));
  }
  return {{"points", std::move(points)}, {"dist", std::move(dist)}};
}

FiniteUltraSpace space_from_json(const Json& j) {
  auto points =
      string_list_from_json(require_field(j, "points", "space"), "space points");
  const auto& jdist = require_field(j, "dist", "space");
  if (!jdist.is_array()) fail_input("space: dist must be a matrix");
  std::vector<std::vector<Rational>> dist;
  for (const auto& jrow : jdist) {
    if (!jrow.is_array()) fail_input("space: dist must be a matrix");
    std::vector<Rational> row;
    for (const auto& e : jrow) {
      row.push_back(parse_rational(require_string(e, "space distance")));
    }
    dist.push_back(std::move(row));
  }
  return FiniteUltraSpace::create(std::move(points), std::move(dist));
}

SpaceSpec space_spec_from_json(const Json& j) {
  if (j.is_object() && j.contains("points")) {
    return SpaceSpec::from_finite(
        std::make_shared<FiniteUltraSpace>(space_from_json(j)));
  }
  if (j.is_object() && j.contains("prefix")) {
    return SpaceSpec::from_degrees(cardinal_seq_from_json(j));
  }
  fail_input(
      "space spec: expected a finite table (\"points\"/\"dist\") or a degree "
      "sequence (\"prefix\"/\"tail\")");
}

Json space_spec_to_json(const SpaceSpec& spec) {
  if (spec.degree_backed()) return cardinal_seq_to_json(*spec.degrees);
  return space_to_json(*spec.finite);
}

Json tower_to_json(const ExplicitTower& T) {
  const RawTower& raw = T.raw();
  Json levels = Json::array();
  for (const auto& level : raw.levels) {
    Json ids = Json::array();
    for (const auto& id : level) ids.push_back(id);
    levels.push_back(std::move(ids));
  }
  Json up = Json::object();
  for (const auto& [child, parent] : raw.up) up[child] = parent;
  Json labels = Json::object();
  for (const auto& [id, label] : raw.labels) {
    Json members = Json::array();
    for (const auto& m : label.members) members.push_back(m);
    labels[id] = {{"members", std::move(members)},
                  {"radius", format_rational(label.radius)}};
  }
  return {{"depth", raw.depth},
          {"levels", std::move(levels)},
          {"up", std::move(up)},
          {"labels", std::move(labels)}};
}

ExplicitTower tower_from_json(const Json& j) {
  RawTower raw;
  const auto& jdepth = require_field(j, "depth", "tower");
  if (!jdepth.is_number_unsigned()) fail_input("tower: depth must be a count");
  raw.depth = jdepth.get<std::uint64_t>();
  const auto& jlevels = require_field(j, "levels", "tower");
  if (!jlevels.is_array()) fail_input("tower: levels must be an array");
  for (const auto& jlevel : jlevels) {
    raw.levels.push_back(string_list_from_json(jlevel, "tower level"));
  }
  const auto& jup = require_field(j, "up", "tower");
  if (!jup.is_object()) fail_input("tower: up must be an object");
  for (const auto& [child, parent] : jup.items()) {
    raw.up[child] = require_string(parent, "tower up");
  }
  if (j.contains("labels")) {
    const auto& jlabels = j.at("labels");
    if (!jlabels.is_object()) fail_input("tower: labels must be an object");
    for (const auto& [id, jlabel] : jlabels.items()) {
      BallLabel label;
      label.members = string_list_from_json(
          require_field(jlabel, "members", "tower label"), "tower label");
      label.radius = parse_rational(require_string(
          require_field(jlabel, "radius", "tower label"), "tower label"));
      raw.labels[id] = std::move(label);
    }
  }
  return ExplicitTower::create(std::move(raw));
}

std::string tower_to_dot(const ExplicitTower& T) {
  const RawTower& raw = T.raw();
  std::ostringstream out;
  out << "digraph tower {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t l = 0; l < raw.levels.size(); ++l) {
    out << "  { rank=same;";
    for (const auto& id : raw.levels[l]) out << " \"" << id << "\";";
    out << " }  // level " << l << "\n";
  }
  for (const auto& level : raw.levels) {
    for (const auto& id : level) {
      auto it = raw.up.find(id);
      if (it != raw.up.end()) {
        out << "  \"" << id << "\" -> \"" << it->second << "\";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

Json multimap_to_json(const MultiMap& R) {
  Json pairs = Json::array();
  for (const auto& [x, p] : R.pairs()) pairs.push_back({x, p});
  return {{"pairs", std::move(pairs)}};
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(
    const Json& j) {
  const auto& jpairs = require_field(j, "pairs", "relation");
  if (!jpairs.is_array()) fail_input("relation: pairs must be an array");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& jp : jpairs) {
    if (!jp.is_array() || jp.size() != 2) {
      fail_input("relation: each pair must be [source, target]");
    }
    out.emplace_back(require_string(jp[0], "relation pair"),
                     require_string(jp[1], "relation pair"));
  }
  return out;
}

Json certificate_to_json(const Certificate& cert) {
  Json pairs = Json::array();
  for (const auto& [x, y] : cert.pairs) pairs.push_back({x, y});
  Json meta = Json::object();
  for (const auto& [k, v] : cert.meta) meta[k] = v;
  Json out = {{"kind", cert.kind},
              {"total", cert.total},
              {"uncovered_source", cert.uncovered_source},
              {"uncovered_target", cert.uncovered_target},
              {"forward", modulus_table_to_json(cert.forward)},
              {"inverse", modulus_table_to_json(cert.inverse)},
              {"pairs", std::move(pairs)},
              {"source_domain", cert.source_domain},
              {"target_domain", cert.target_domain},
              {"meta", std::move(meta)}};
  if (cert.surjective.has_value()) {
    out["surjective"] = *cert.surjective;
  } else {
    out["surjective"] = nullptr;
  }
  return out;
}

Certificate certificate_from_json(const Json& j) {
  Certificate cert;
  cert.kind = require_string(require_field(j, "kind", "certificate"),
                             "certificate kind");
  const auto& jtotal = require_field(j, "total", "certificate");
  if (!jtotal.is_boolean()) fail_input("certificate: total must be a boolean");
  cert.total = jtotal.get<bool>();
  const auto& jsurj = require_field(j, "surjective", "certificate");
  if (jsurj.is_boolean()) {
    cert.surjective = jsurj.get<bool>();
  } else if (!jsurj.is_null()) {
    fail_input("certificate: surjective must be a boolean or null");
  }
  cert.uncovered_source = string_list_from_json(
      require_field(j, "uncovered_source", "certificate"), "certificate");
  cert.uncovered_target = string_list_from_json(
      require_field(j, "uncovered_target", "certificate"), "certificate");
  cert.forward = modulus_table_from_json(
      require_field(j, "forward", "certificate"), "certificate forward");
  cert.inverse = modulus_table_from_json(
      require_field(j, "inverse", "certificate"), "certificate inverse");
  for (const auto& p : pairs_from_json(j)) cert.pairs.push_back(p);
  cert.source_domain = string_list_from_json(
      require_field(j, "source_domain", "certificate"), "certificate");
  cert.target_domain = string_list_from_json(
      require_field(j, "target_domain", "certificate"), "certificate");
  if (j.contains("meta")) {
    const auto& jmeta = j.at("meta");
    if (!jmeta.is_object()) fail_input("certificate: meta must be an object");
    for (const auto& [k, v] : jmeta.items()) {
      cert.meta[k] = require_string(v, "certificate meta");
    }
  }
  return cert;
}

Json invariant_pair_to_json(const InvariantPair& inv) {
  return {cardinal_to_json(inv.flat), cardinal_to_json(inv.sharp)};
}

Json verdict_to_json(const Verdict& v) {
  Json out = {{"relation", relation_str(v.relation)},
              {"constructive", v.constructive},
              {"citation", v.citation}};
  out["certificate"] =
      v.certificate ? certificate_to_json(*v.certificate) : Json(nullptr);
  Json inv = Json::object();
  inv["X"] = v.x_invariants ? invariant_pair_to_json(*v.x_invariants)
                            : Json(nullptr);
  inv["Y"] = v.y_invariants ? invariant_pair_to_json(*v.y_invariants)
                            : Json(nullptr);
  out["invariants"] = std::move(inv);
  return out;
}

Json tower_map_to_json(const TowerMap& phi) {
  auto pairs = phi.evaluated_pairs();
  std::set<std::uint64_t> levels;
  std::uint64_t expansion = 0;
  Json mapping = Json::object();
  for (const auto& [s, t] : pairs) {
    levels.insert(s.level);
    expansion = std::max(expansion, s.level);
    mapping[tnode_key(phi.source(), s)] = tnode_key(phi.target(), t);
  }
  Json level_map = Json::array();
  for (auto l : levels) level_map.push_back({l, phi.level_image(l)});
  Json out = {{"level_map", std::move(level_map)},
              {"mapping", std::move(mapping)}};
  if (phi.kind() == TowerMap::Kind::ExplicitTable) {
    out["kind"] = "explicit";
  } else {
    out["kind"] = "lazy";
    out["expansion_depth"] = expansion;
  }
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  auto j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) fail_input("malformed JSON");
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail_input("cannot write \"" + path + "\"");
  out << text;
}

}  // namespace uc
