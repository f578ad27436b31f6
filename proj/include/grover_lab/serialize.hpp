#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "grover_lab/dense_tensor.hpp"
#include "grover_lab/diagram.hpp"
#include "grover_lab/error.hpp"
#include "grover_lab/generator.hpp"
#include "grover_lab/space.hpp"

namespace grover_lab {

using Json = nlohmann::json;

inline constexpr int kDiagramFormatVersion = 1;

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Json tensor_to_json(const DenseTensor& t) {
  Json entries = Json::array();
  for (const auto& v : t.entries()) entries.push_back(complex_to_json(v));
  return Json{{"rows", t.rows()}, {"cols", t.cols()}, {"entries", std::move(entries)}};
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::parse_error, where + ": " + why);
}

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(where, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const Json::exception& e) {
    parse_fail(where, std::string("field '") + key + "': " + e.what());
  }
}

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail(where, "complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline DenseTensor tensor_from_json(const Json& j, const std::string& where = "tensor") {
  const auto rows = detail::field<std::size_t>(j, "rows", where);
  const auto cols = detail::field<std::size_t>(j, "cols", where);
  const auto entries = detail::field<Json>(j, "entries", where);
  if (!entries.is_array()) detail::parse_fail(where, "'entries' must be an array");
  std::vector<Complex> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(detail::complex_from_json(e, where));
  try {
    return DenseTensor(rows, cols, std::move(values));
  } catch (const Error& e) {
    detail::parse_fail(where, e.what());
  }
}

namespace detail {

// Collects the spaces and groups a diagram mentions, in order of first use.
class SymbolTable {
 public:
  void add(const SpaceLabel& s) {
    for (const auto& known : spaces_) {
      if (known.name != s.name) continue;
      if (known == s) return;
      throw Error(ErrorCode::invalid_argument,
                  "two different spaces share the name '" + s.name + "'");
    }
    spaces_.push_back(s);
  }

  void add(const GroupRef& g) {
    for (const auto& known : groups_) {
      if (known->name != g->name) continue;
      if (known == g) return;
      throw Error(ErrorCode::invalid_argument,
                  "two different groups share the name '" + g->name + "'");
    }
    groups_.push_back(g);
    add(g->space());
  }

  void add(const Generator& g) {
    std::visit(overloaded{
                   [&](const gen::FunctionBox& x) {
                     add(x.domain);
                     add(x.codomain);
                   },
                   [&](const gen::GroupMult& x) { add(x.group); },
                   [&](const gen::GroupUnit& x) { add(x.group); },
                   [&](const gen::RepBox& x) { add(x.group); },
                   [&](const gen::IrrepSum& x) { add(x.group); },
                   [&](const gen::CustomBox& x) {
                     for (const auto& s : x.inputs) add(s);
                     for (const auto& s : x.outputs) add(s);
                   },
                   [&](const gen::Swap& x) {
                     add(x.left);
                     add(x.right);
                   },
                   [&](const auto& x) { add(x.space); },
               },
               g);
  }

  const std::vector<SpaceLabel>& spaces() const { return spaces_; }
  const std::vector<GroupRef>& groups() const { return groups_; }

 private:
  std::vector<SpaceLabel> spaces_;
  std::vector<GroupRef> groups_;
};

inline Json names_of(const std::vector<SpaceLabel>& labels) {
  Json out = Json::array();
  for (const auto& l : labels) out.push_back(l.name);
  return out;
}

inline Json group_to_json(const GroupSpec& g) {
  Json j{{"name", g.name},
         {"order", g.order},
         {"identity", g.identity_index},
         {"table", g.multiplication_table}};
  if (g.character_table) {
    Json rows = Json::array();
    for (const auto& row : *g.character_table) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(complex_to_json(v));
      rows.push_back(std::move(r));
    }
    j["characters"] = std::move(rows);
  }
  return j;
}

inline Json generator_to_json(const Generator& g) {
  Json j{{"variant", std::string(variant_name(g))}};
  std::visit(overloaded{
                 [&](const gen::FunctionBox& x) {
                   j["domain"] = x.domain.name;
                   j["codomain"] = x.codomain.name;
                   j["table"] = x.table;
                 },
                 [&](const gen::Point& x) {
                   j["space"] = x.space.name;
                   j["element"] = x.element;
                 },
                 [&](const gen::PointEffect& x) {
                   j["space"] = x.space.name;
                   j["element"] = x.element;
                 },
                 [&](const gen::GroupMult& x) { j["group"] = x.group->name; },
                 [&](const gen::GroupUnit& x) { j["group"] = x.group->name; },
                 [&](const gen::IrrepSum& x) { j["group"] = x.group->name; },
                 [&](const gen::RepBox& x) {
                   j["group"] = x.group->name;
                   j["irrep"] = x.irrep;
                   j["dimension"] = x.dimension;
                 },
                 [&](const gen::CustomBox& x) {
                   j["name"] = x.name;
                   j["inputs"] = names_of(x.inputs);
                   j["outputs"] = names_of(x.outputs);
                   j["matrix"] = tensor_to_json(x.matrix);
                 },
                 [&](const gen::Swap& x) {
                   j["left"] = x.left.name;
                   j["right"] = x.right.name;
                 },
                 [&](const auto& x) { j["space"] = x.space.name; },
             },
             g);
  return j;
}

}  // namespace detail

/// Versioned document: {version, spaces, groups, inputs, outputs, slices}.
/// Wires and generator fields refer to spaces and groups by name.
inline Json diagram_to_json(const Diagram& d) {
  detail::SymbolTable symbols;
  for (const auto& s : d.inputs()) symbols.add(s);
  for (const auto& s : d.outputs()) symbols.add(s);
  for (const auto& slice : d.slices())
    for (const auto& g : slice) symbols.add(g);

  Json spaces = Json::array();
  for (const auto& s : symbols.spaces())
    spaces.push_back({{"name", s.name}, {"kind", kind_name(s.kind)}, {"dimension", s.dimension}});
  Json groups = Json::array();
  for (const auto& g : symbols.groups()) groups.push_back(detail::group_to_json(*g));
  Json slices = Json::array();
  for (const auto& slice : d.slices()) {
    Json s = Json::array();
    for (const auto& g : slice) s.push_back(detail::generator_to_json(g));
    slices.push_back(std::move(s));
  }
  return Json{{"version", kDiagramFormatVersion},
              {"spaces", std::move(spaces)},
              {"groups", std::move(groups)},
              {"inputs", detail::names_of(d.inputs())},
              {"outputs", detail::names_of(d.outputs())},
              {"slices", std::move(slices)}};
}

/// Reads a diagram document. Inter-slice typing is NOT checked here; run
/// validate() on the result.
inline Diagram diagram_from_json(const Json& doc) {
  using detail::field;
  using detail::parse_fail;
  const auto version = field<int>(doc, "version", "document");
  if (version != kDiagramFormatVersion)
    parse_fail("document", "unsupported version " + std::to_string(version));

  std::map<std::string, SpaceLabel> spaces;
  for (const auto& s : field<Json>(doc, "spaces", "document")) {
    const std::string where = "spaces";
    SpaceLabel label;
    try {
      label = SpaceLabel::make(parse_kind(field<std::string>(s, "kind", where)),
                               field<std::string>(s, "name", where),
                               field<std::size_t>(s, "dimension", where));
    } catch (const Error& e) {
      parse_fail(where, e.what());
    }
    if (!spaces.emplace(label.name, label).second)
      parse_fail(where, "duplicate space name '" + label.name + "'");
  }

  std::map<std::string, GroupRef> groups;
  if (doc.contains("groups")) {
    for (const auto& g : field<Json>(doc, "groups", "document")) {
      const std::string where = "groups";
      GroupSpec spec;
      spec.name = field<std::string>(g, "name", where);
      spec.order = field<std::size_t>(g, "order", where);
      spec.identity_index = field<std::size_t>(g, "identity", where);
      spec.multiplication_table = field<std::vector<std::vector<std::size_t>>>(g, "table", where);
      if (g.contains("characters")) {
        std::vector<std::vector<Complex>> chi;
        for (const auto& row : field<Json>(g, "characters", where)) {
          std::vector<Complex> r;
          for (const auto& v : row) r.push_back(detail::complex_from_json(v, where));
          chi.push_back(std::move(r));
        }
        spec.character_table = std::move(chi);
      }
      try {
        GroupRef ref(std::move(spec));
        auto it = spaces.find(ref->name);
        if (it == spaces.end() || it->second != ref->space())
          parse_fail(where, "group '" + ref->name + "' needs a matching group space");
        groups.emplace(ref->name, ref);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error) throw;
        parse_fail(where, e.what());
      }
    }
  }

  auto space = [&](const std::string& name, const std::string& where) {
    auto it = spaces.find(name);
    if (it == spaces.end()) parse_fail(where, "unknown space '" + name + "'");
    return it->second;
  };
  auto space_list = [&](const Json& names, const std::string& where) {
    if (!names.is_array()) parse_fail(where, "expected a list of space names");
    std::vector<SpaceLabel> out;
    for (const auto& n : names) {
      if (!n.is_string()) parse_fail(where, "space names are strings");
      out.push_back(space(n.get<std::string>(), where));
    }
    return out;
  };
  auto group = [&](const std::string& name, const std::string& where) {
    auto it = groups.find(name);
    if (it == groups.end()) parse_fail(where, "unknown group '" + name + "'");
    return it->second;
  };

  std::vector<Slice> slices;
  const auto slices_json = field<Json>(doc, "slices", "document");
  if (!slices_json.is_array()) parse_fail("document", "'slices' must be an array");
  for (std::size_t i = 0; i < slices_json.size(); ++i) {
    if (!slices_json[i].is_array()) parse_fail("slice " + std::to_string(i), "expected an array");
    Slice slice;
    for (std::size_t k = 0; k < slices_json[i].size(); ++k) {
      const Json& r = slices_json[i][k];
      const std::string where = "slice " + std::to_string(i) + " generator " + std::to_string(k);
      const auto variant = field<std::string>(r, "variant", where);
      auto sp = [&](const char* key) { return space(field<std::string>(r, key, where), where); };
      Generator g;
      if (variant == "Identity") g = gen::Identity{sp("space")};
      else if (variant == "Mult") g = gen::Mult{sp("space")};
      else if (variant == "Unit") g = gen::Unit{sp("space")};
      else if (variant == "Comult") g = gen::Comult{sp("space")};
      else if (variant == "Counit") g = gen::Counit{sp("space")};
      else if (variant == "FunctionBox")
        g = gen::FunctionBox{sp("domain"), sp("codomain"),
                             field<std::vector<std::size_t>>(r, "table", where)};
      else if (variant == "Point")
        g = gen::Point{sp("space"), field<std::size_t>(r, "element", where)};
      else if (variant == "PointEffect")
        g = gen::PointEffect{sp("space"), field<std::size_t>(r, "element", where)};
      else if (variant == "GroupMult")
        g = gen::GroupMult{group(field<std::string>(r, "group", where), where)};
      else if (variant == "GroupUnit")
        g = gen::GroupUnit{group(field<std::string>(r, "group", where), where)};
      else if (variant == "IrrepSum")
        g = gen::IrrepSum{group(field<std::string>(r, "group", where), where)};
      else if (variant == "RepBox")
        g = gen::RepBox{group(field<std::string>(r, "group", where), where),
                        field<std::size_t>(r, "irrep", where),
                        field<std::size_t>(r, "dimension", where)};
      else if (variant == "CustomBox")
        g = gen::CustomBox{field<std::string>(r, "name", where),
                           space_list(field<Json>(r, "inputs", where), where),
                           space_list(field<Json>(r, "outputs", where), where),
                           tensor_from_json(field<Json>(r, "matrix", where), where)};
      else if (variant == "Swap")
        g = gen::Swap{sp("left"), sp("right")};
      else
        parse_fail(where, "unknown variant '" + variant + "'");
      try {
        check_generator(g);
      } catch (const Error& e) {
        parse_fail(where, e.what());
      }
      slice.push_back(std::move(g));
    }
    slices.push_back(std::move(slice));
  }
  return Diagram::from_slices(space_list(field<Json>(doc, "inputs", "document"), "inputs"),
                              space_list(field<Json>(doc, "outputs", "document"), "outputs"),
                              std::move(slices));
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
inline std::string print_diagram(const Diagram& d) { return diagram_to_json(d).dump(2) + "\n"; }

/// Parses JSON text, reporting syntax errors with line and column.
inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + ": " + e.what());
  }
}

inline Diagram parse_diagram(std::string_view text) {
  return diagram_from_json(parse_json_text(text));
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_not_found, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads a diagram file and rejects it with type-error unless it validates.
inline Diagram load_diagram_file(const std::filesystem::path& path) {
  Diagram d = parse_diagram(read_text_file(path));
  if (auto report = validate(d); !report.ok())
    throw Error(ErrorCode::type_error, report.to_string());
  return d;
}

inline Json typing_report_to_json(const TypingReport& r) {
  Json mismatches = Json::array();
  for (const auto& m : r.mismatches)
    mismatches.push_back({{"slice_index", m.slice_index},
                          {"wire_position", m.wire_position},
                          {"expected", m.expected ? Json(m.expected->to_string()) : Json()},
                          {"found", m.found ? Json(m.found->to_string()) : Json()}});
  return Json{{"ok", r.ok()}, {"mismatches", std::move(mismatches)}};
}

}  // namespace grover_lab
