#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "grover_lab/diagram.hpp"
#include "grover_lab/error.hpp"
#include "grover_lab/eval.hpp"
#include "grover_lab/generator.hpp"
#include "grover_lab/space.hpp"

namespace grover_lab {

enum class SideCondition { none, is_function_box, is_classical_point, is_representation, groups_match };

inline std::string_view side_condition_name(SideCondition c) {
  switch (c) {
    case SideCondition::none: return "none";
    case SideCondition::is_function_box: return "is-function-box";
    case SideCondition::is_classical_point: return "is-classical-point";
    case SideCondition::is_representation: return "is-representation";
    case SideCondition::groups_match: return "groups-match";
  }
  return "none";
}

enum class MatchStatus { no_match, side_condition_failed, matched };

struct RuleMatch {
  MatchStatus status = MatchStatus::no_match;
  Diagram rhs;
};

/// Recognizes the left-hand side on two runs of generators, `first` taken
/// from slice i and `second` from slice i+1, and builds the replacement.
using FragmentMatcher =
    std::function<RuleMatch(std::span<const Generator> first, std::span<const Generator> second)>;

/// Produces left-hand-side instances of a rule over spaces of the given size.
using InstanceGenerator = std::function<std::vector<Diagram>(std::size_t size, std::mt19937_64&)>;

/// A local equation between diagram fragments spanning two adjacent slices.
struct RewriteRule {
  std::string name;
  SideCondition side_condition = SideCondition::none;
  std::size_t first_width = 1;   ///< generators matched in slice i
  std::size_t second_width = 1;  ///< generators matched in slice i+1
  FragmentMatcher match;
  InstanceGenerator instances;
  /// A representative instance over two-element spaces.
  Diagram lhs;
  Diagram rhs;
};

/// Where a fragment starts: the slice index and the position of the first
/// matched generator within that slice.
struct RewritePosition {
  std::size_t slice = 0;
  std::size_t offset = 0;
  friend bool operator==(const RewritePosition&, const RewritePosition&) = default;
};

namespace detail {

struct FragmentSite {
  std::size_t slice;
  std::size_t first_begin, first_end;
  std::size_t second_begin, second_end;
};

inline std::size_t output_width(std::span<const Generator> run) {
  std::size_t w = 0;
  for (const auto& g : run) w += outputs_of(g).size();
  return w;
}

inline std::size_t input_width(std::span<const Generator> run) {
  std::size_t w = 0;
  for (const auto& g : run) w += inputs_of(g).size();
  return w;
}

// Finds the generator runs the rule would inspect at `at`: first_width
// generators from slice at.slice and the second_width generators of the
// next slice that consume exactly their output wires.
inline std::optional<FragmentSite> locate(const Diagram& d, const RewriteRule& rule,
                                          RewritePosition at) {
  const auto& slices = d.slices();
  if (at.slice + 1 >= slices.size()) return std::nullopt;
  const Slice& first = slices[at.slice];
  const Slice& second = slices[at.slice + 1];
  if (at.offset + rule.first_width > first.size()) return std::nullopt;
  std::span<const Generator> all_first(first);
  const std::size_t wire = output_width(all_first.first(at.offset));
  const std::size_t width = output_width(all_first.subspan(at.offset, rule.first_width));
  if (width == 0) return std::nullopt;

  std::size_t consumed = 0, q = 0;
  for (; q < second.size(); ++q) {
    const std::size_t w = inputs_of(second[q]).size();
    if (consumed == wire && w > 0) break;
    consumed += w;
    if (consumed > wire) return std::nullopt;
  }
  if (q + rule.second_width > second.size()) return std::nullopt;
  if (input_width(std::span<const Generator>(second).subspan(q, rule.second_width)) != width)
    return std::nullopt;
  return FragmentSite{at.slice, at.offset, at.offset + rule.first_width, q,
                      q + rule.second_width};
}

inline bool is_identity_slice(const Slice& s) {
  return std::all_of(s.begin(), s.end(), [](const Generator& g) { return is_identity(g); });
}

inline Diagram drop_identity_slices(const Diagram& d) {
  std::vector<Slice> kept;
  for (const auto& s : d.slices())
    if (!is_identity_slice(s)) kept.push_back(s);
  return Diagram::from_slices(d.inputs(), d.outputs(), std::move(kept));
}

inline Diagram splice(const Diagram& d, const FragmentSite& site, const Diagram& rhs) {
  Slice rhs_first, rhs_second;
  switch (rhs.slices().size()) {
    case 0:
      rhs_first = identity_slice(rhs.inputs());
      rhs_second = identity_slice(rhs.outputs());
      break;
    case 1:
      rhs_first = rhs.slices()[0];
      rhs_second = identity_slice(rhs.outputs());
      break;
    case 2:
      rhs_first = rhs.slices()[0];
      rhs_second = rhs.slices()[1];
      break;
    default:
      throw Error(ErrorCode::invalid_argument, "rule right-hand sides span at most two slices");
  }
  std::vector<Slice> slices = d.slices();
  auto replace = [](Slice& target, std::size_t begin, std::size_t end, const Slice& with) {
    Slice out(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(begin));
    out.insert(out.end(), with.begin(), with.end());
    out.insert(out.end(), target.begin() + static_cast<std::ptrdiff_t>(end), target.end());
    target = std::move(out);
  };
  replace(slices[site.slice], site.first_begin, site.first_end, rhs_first);
  replace(slices[site.slice + 1], site.second_begin, site.second_end, rhs_second);
  return drop_identity_slices(Diagram::from_slices(d.inputs(), d.outputs(), std::move(slices)));
}

inline Diagram fragment(Slice first, Slice second) {
  auto in = slice_inputs(first);
  auto out = slice_outputs(second);
  return Diagram::from_slices(std::move(in), std::move(out), {std::move(first), std::move(second)});
}

template <class T>
const T* as(const Generator& g) {
  return std::get_if<T>(&g);
}

// A state 1 -> S with exactly one output wire.
inline bool is_state(const Generator& g) {
  return inputs_of(g).empty() && outputs_of(g).size() == 1;
}

inline bool is_wire_map(const Generator& g) {
  return inputs_of(g).size() == 1 && outputs_of(g).size() == 1;
}

// Basis index of a classical point, if g is one.
inline std::optional<std::size_t> classical_point(const Generator& g) {
  if (const auto* p = as<gen::Point>(g)) return p->element;
  if (const auto* u = as<gen::GroupUnit>(g)) return u->group->identity_index;
  return std::nullopt;
}

inline Diagram scalar_diagram(Complex value) {
  if (value == Complex{1.0, 0.0}) return Diagram{};
  return Diagram::from_slices({}, {}, {Slice{scalar_box(value)}});
}

inline RuleMatch matched(Diagram rhs) { return {MatchStatus::matched, std::move(rhs)}; }
inline RuleMatch no_match() { return {MatchStatus::no_match, {}}; }
inline RuleMatch side_failed() { return {MatchStatus::side_condition_failed, {}}; }

inline std::uint64_t seed_for(std::string_view name, std::size_t size) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return h ^ (static_cast<std::uint64_t>(size) * 0x9e3779b97f4a7c15ull);
}

inline SpaceLabel instance_space(std::size_t size, const char* name = "S") {
  return SpaceLabel::set(name, size);
}

// All functions S -> T when |S| <= 3, otherwise 100 random ones.
inline std::vector<gen::FunctionBox> function_instances(const SpaceLabel& s, const SpaceLabel& t,
                                                        std::mt19937_64& rng) {
  std::vector<gen::FunctionBox> out;
  if (s.dimension <= 3) {
    std::vector<std::size_t> table(s.dimension, 0);
    while (true) {
      out.push_back({s, t, table});
      std::size_t i = 0;
      for (; i < table.size(); ++i) {
        if (++table[i] < t.dimension) break;
        table[i] = 0;
      }
      if (i == table.size()) break;
    }
    return out;
  }
  std::uniform_int_distribution<std::size_t> pick(0, t.dimension - 1);
  for (int n = 0; n < 100; ++n) {
    std::vector<std::size_t> table(s.dimension);
    for (auto& v : table) v = pick(rng);
    out.push_back({s, t, std::move(table)});
  }
  return out;
}

inline std::vector<SpaceLabel> codomain_instances(std::size_t size) {
  std::vector<std::size_t> dims = {1, 2, 3};
  if (size > 3) dims.push_back(size);
  std::vector<SpaceLabel> out;
  for (auto d : dims) out.push_back(instance_space(d, "T"));
  return out;
}

// Groups exercised at a given size: the cyclic group, plus S3 at size 6.
inline std::vector<GroupRef> group_instances(std::size_t size) {
  std::vector<GroupRef> out{cyclic_group(size)};
  if (size == 6) out.push_back(symmetric_group_3());
  return out;
}

// Classical points on S: every basis element.
inline std::vector<Generator> point_instances(const SpaceLabel& s) {
  std::vector<Generator> out;
  for (std::size_t x = 0; x < s.dimension; ++x) out.push_back(gen::Point{s, x});
  return out;
}

}  // namespace detail

/// Tries one rule at one position; returns the rewritten diagram on success.
inline RuleMatch try_rule(const RewriteRule& rule, const Diagram& d, RewritePosition at) {
  auto site = detail::locate(d, rule, at);
  if (!site) return detail::no_match();
  const Slice& first = d.slices()[site->slice];
  const Slice& second = d.slices()[site->slice + 1];
  RuleMatch m = rule.match(
      std::span<const Generator>(first).subspan(site->first_begin, rule.first_width),
      std::span<const Generator>(second).subspan(site->second_begin, rule.second_width));
  if (m.status != MatchStatus::matched) return m;
  return detail::matched(detail::splice(d, *site, m.rhs));
}

/// Replaces the rule's left-hand side found at `at` by its right-hand side.
inline Diagram apply_rule(const RewriteRule& rule, const Diagram& d, RewritePosition at) {
  RuleMatch m = try_rule(rule, d, at);
  switch (m.status) {
    case MatchStatus::matched: return std::move(m.rhs);
    case MatchStatus::side_condition_failed:
      throw Error(ErrorCode::side_condition_failed,
                  rule.name + ": side condition " +
                      std::string(side_condition_name(rule.side_condition)) + " fails at slice " +
                      std::to_string(at.slice) + " offset " + std::to_string(at.offset));
    case MatchStatus::no_match: break;
  }
  throw Error(ErrorCode::no_match, rule.name + " does not match at slice " +
                                       std::to_string(at.slice) + " offset " +
                                       std::to_string(at.offset));
}

namespace detail {

inline RewriteRule make_rule(std::string name, SideCondition side, std::size_t first_width,
                             std::size_t second_width, FragmentMatcher match,
                             InstanceGenerator instances) {
  RewriteRule r{std::move(name), side, first_width, second_width, std::move(match),
                std::move(instances), {}, {}};
  std::mt19937_64 rng(seed_for(r.name, 2));
  auto examples = r.instances(2, rng);
  r.lhs = examples.front();
  r.rhs = apply_rule(r, r.lhs, {0, 0});
  return r;
}

inline std::vector<RewriteRule> build_catalog() {
  using Span = std::span<const Generator>;
  std::vector<RewriteRule> rules;

  // Classical points are copied by the comultiplication.
  rules.push_back(make_rule(
      "R1-copy", SideCondition::is_classical_point, 1, 1,
      [](Span a, Span b) {
        if (!is_state(a[0]) || !as<gen::Comult>(b[0])) return no_match();
        if (!classical_point(a[0])) return side_failed();
        return matched(Diagram::from_slices({}, outputs_of(b[0]), {Slice{a[0], a[0]}}));
      },
      [](std::size_t n, std::mt19937_64&) {
        const auto s = instance_space(n);
        std::vector<Diagram> out;
        for (const auto& p : point_instances(s)) out.push_back(fragment({p}, {gen::Comult{s}}));
        for (const auto& g : group_instances(n))
          out.push_back(fragment({gen::GroupUnit{g}}, {gen::Comult{g->space()}}));
        return out;
      }));

  // Classical points are deleted by the counit.
  rules.push_back(make_rule(
      "R2-delete", SideCondition::is_classical_point, 1, 1,
      [](Span a, Span b) {
        if (!is_state(a[0]) || !as<gen::Counit>(b[0])) return no_match();
        if (!classical_point(a[0])) return side_failed();
        return matched(Diagram{});
      },
      [](std::size_t n, std::mt19937_64&) {
        const auto s = instance_space(n);
        std::vector<Diagram> out;
        for (const auto& p : point_instances(s)) out.push_back(fragment({p}, {gen::Counit{s}}));
        for (const auto& g : group_instances(n))
          out.push_back(fragment({gen::GroupUnit{g}}, {gen::Counit{g->space()}}));
        return out;
      }));

  // <y|x> = delta_xy.
  rules.push_back(make_rule(
      "R3-point-inner-product", SideCondition::is_classical_point, 1, 1,
      [](Span a, Span b) {
        const auto* effect = as<gen::PointEffect>(b[0]);
        if (!is_state(a[0]) || !effect) return no_match();
        auto x = classical_point(a[0]);
        if (!x) return side_failed();
        return matched(scalar_diagram(*x == effect->element ? 1.0 : 0.0));
      },
      [](std::size_t n, std::mt19937_64&) {
        const auto s = instance_space(n);
        std::vector<Diagram> out;
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            out.push_back(fragment({gen::Point{s, x}}, {gen::PointEffect{s, y}}));
        return out;
      }));

  // f|x> = |f(x)>.
  rules.push_back(make_rule(
      "R4-function-on-point", SideCondition::is_function_box, 1, 1,
      [](Span a, Span b) {
        if (!is_state(a[0]) || !is_wire_map(b[0])) return no_match();
        const auto* f = as<gen::FunctionBox>(b[0]);
        auto x = classical_point(a[0]);
        if (!f || !x) return side_failed();
        return matched(Diagram::from_slices({}, {f->codomain},
                                            {Slice{gen::Point{f->codomain, f->table[*x]}}}));
      },
      [](std::size_t n, std::mt19937_64& rng) {
        const auto s = instance_space(n);
        std::vector<Diagram> out;
        for (const auto& t : codomain_instances(n))
          for (const auto& f : function_instances(s, t, rng))
            for (const auto& p : point_instances(s)) out.push_back(fragment({p}, {f}));
        return out;
      }));

  // Functions commute with copying: (f (x) f) o m-dagger = m-dagger o f.
  rules.push_back(make_rule(
      "R4a-comonoid-copy", SideCondition::is_function_box, 1, 2,
      [](Span a, Span b) {
        if (!as<gen::Comult>(a[0]) || !is_wire_map(b[0]) || !is_wire_map(b[1])) return no_match();
        const auto* f = as<gen::FunctionBox>(b[0]);
        const auto* g = as<gen::FunctionBox>(b[1]);
        if (!f || !g || !(*f == *g)) return side_failed();
        return matched(Diagram::from_slices({f->domain}, {f->codomain, f->codomain},
                                            {Slice{*f}, Slice{gen::Comult{f->codomain}}}));
      },
      [](std::size_t n, std::mt19937_64& rng) {
        const auto s = instance_space(n);
        std::vector<Diagram> out;
        for (const auto& t : codomain_instances(n))
          for (const auto& f : function_instances(s, t, rng))
            out.push_back(fragment({gen::Comult{s}}, {f, f}));
        return out;
      }));

  // Functions commute with deletion: u-dagger o f = u-dagger.
  rules.push_back(make_rule(
      "R4b-comonoid-delete", SideCondition::is_function_box, 1, 1,
      [](Span a, Span b) {
        if (!is_wire_map(a[0]) || !as<gen::Counit>(b[0])) return no_match();
        const auto* f = as<gen::FunctionBox>(a[0]);
        if (!f) return side_failed();
        return matched(make_generator(gen::Counit{f->domain}));
      },
      [](std::size_t n, std::mt19937_64& rng) {
        const auto s = instance_space(n);
        std::vector<Diagram> out;
        for (const auto& t : codomain_instances(n))
          for (const auto& f : function_instances(s, t, rng))
            out.push_back(fragment({f}, {gen::Counit{t}}));
        return out;
      }));

  // One-dimensional representations are multiplicative: chi(gh) = chi(g) chi(h).
  rules.push_back(make_rule(
      "R6a-rep-merge", SideCondition::is_representation, 1, 1,
      [](Span a, Span b) {
        const auto* m = as<gen::GroupMult>(a[0]);
        const auto* rho = as<gen::RepBox>(b[0]);
        if (!m || !rho) return no_match();
        if (!(m->group == rho->group) || rho->dimension != 1) return side_failed();
        const auto g = m->group->space();
        return matched(Diagram::from_slices({g, g}, {}, {Slice{*rho, *rho}}));
      },
      [](std::size_t n, std::mt19937_64&) {
        std::vector<Diagram> out;
        for (const auto& g : group_instances(n))
          for (std::size_t i = 0; i < g->irrep_count(); ++i)
            if (g->irrep_dimension(i) == 1)
              out.push_back(fragment({gen::GroupMult{g}}, {gen::RepBox{g, i, 1}}));
        return out;
      }));

  // A representation sends the unit element to the identity matrix, whose
  // trace is the dimension.
  rules.push_back(make_rule(
      "R6b-rep-unit", SideCondition::groups_match, 1, 1,
      [](Span a, Span b) {
        const auto* e = as<gen::GroupUnit>(a[0]);
        const auto* rho = as<gen::RepBox>(b[0]);
        if (!e || !rho) return no_match();
        if (!(e->group == rho->group)) return side_failed();
        return matched(scalar_diagram(static_cast<double>(rho->dimension)));
      },
      [](std::size_t n, std::mt19937_64&) {
        std::vector<Diagram> out;
        for (const auto& g : group_instances(n))
          for (std::size_t i = 0; i < g->irrep_count(); ++i)
            out.push_back(fragment({gen::GroupUnit{g}},
                                   {gen::RepBox{g, i, g->irrep_dimension(i)}}));
        return out;
      }));

  // Summing an irreducible character over the group gives |G| for the
  // trivial irrep and 0 otherwise.
  rules.push_back(make_rule(
      "R7a-irrep-sum-elements", SideCondition::is_representation, 1, 1,
      [](Span a, Span b) {
        const auto* u = as<gen::Unit>(a[0]);
        const auto* rho = as<gen::RepBox>(b[0]);
        if (!u || !rho) return no_match();
        if (u->space != rho->group->space()) return side_failed();
        const bool trivial = rho->group->trivial_irrep() == rho->irrep;
        return matched(scalar_diagram(trivial ? static_cast<double>(rho->group->order) : 0.0));
      },
      [](std::size_t n, std::mt19937_64&) {
        std::vector<Diagram> out;
        for (const auto& g : group_instances(n))
          for (std::size_t i = 0; i < g->irrep_count(); ++i)
            out.push_back(fragment({gen::Unit{g->space()}},
                                   {gen::RepBox{g, i, g->irrep_dimension(i)}}));
        return out;
      }));

  // Sum over irreps of dim(sigma) chi_sigma(g) = |G| delta_{g,e}.
  rules.push_back(make_rule(
      "R7b-irrep-sum-irreps", SideCondition::is_classical_point, 1, 1,
      [](Span a, Span b) {
        const auto* sum = as<gen::IrrepSum>(b[0]);
        if (!is_state(a[0]) || !sum) return no_match();
        auto g = classical_point(a[0]);
        if (!g) return side_failed();
        if (const auto* e = as<gen::GroupUnit>(a[0]); e && !(e->group == sum->group))
          return side_failed();
        const bool at_unit = *g == sum->group->identity_index;
        return matched(scalar_diagram(at_unit ? static_cast<double>(sum->group->order) : 0.0));
      },
      [](std::size_t n, std::mt19937_64&) {
        std::vector<Diagram> out;
        for (const auto& g : group_instances(n)) {
          for (std::size_t x = 0; x < g->order; ++x)
            out.push_back(fragment({gen::Point{g->space(), x}}, {gen::IrrepSum{g}}));
          out.push_back(fragment({gen::GroupUnit{g}}, {gen::IrrepSum{g}}));
        }
        return out;
      }));

  auto one_space = [](auto build) {
    return [build](std::size_t n, std::mt19937_64&) {
      return std::vector<Diagram>{build(instance_space(n))};
    };
  };

  // m o m-dagger = id.
  rules.push_back(make_rule(
      "R5-special", SideCondition::none, 1, 1,
      [](Span a, Span b) {
        const auto* c = as<gen::Comult>(a[0]);
        const auto* m = as<gen::Mult>(b[0]);
        if (!c || !m || c->space != m->space) return no_match();
        return matched(Diagram::identity({c->space}));
      },
      one_space([](const SpaceLabel& s) { return fragment({gen::Comult{s}}, {gen::Mult{s}}); })));

  // m o (u (x) id) = id and m o (id (x) u) = id.
  auto unit_law = [](bool unit_on_left) {
    return [unit_on_left](Span a, Span b) {
      const auto& unit_gen = a[unit_on_left ? 0 : 1];
      const auto& wire_gen = a[unit_on_left ? 1 : 0];
      const auto* u = as<gen::Unit>(unit_gen);
      const auto* id = as<gen::Identity>(wire_gen);
      const auto* m = as<gen::Mult>(b[0]);
      if (!u || !id || !m || u->space != m->space || id->space != m->space) return no_match();
      return matched(Diagram::identity({m->space}));
    };
  };
  rules.push_back(make_rule("R5-unit-left", SideCondition::none, 2, 1, unit_law(true),
                            one_space([](const SpaceLabel& s) {
                              return fragment({gen::Unit{s}, gen::Identity{s}}, {gen::Mult{s}});
                            })));
  rules.push_back(make_rule("R5-unit-right", SideCondition::none, 2, 1, unit_law(false),
                            one_space([](const SpaceLabel& s) {
                              return fragment({gen::Identity{s}, gen::Unit{s}}, {gen::Mult{s}});
                            })));

  // (u-dagger (x) id) o m-dagger = id and (id (x) u-dagger) o m-dagger = id.
  auto counit_law = [](bool counit_on_left) {
    return [counit_on_left](Span a, Span b) {
      const auto* c = as<gen::Comult>(a[0]);
      const auto* e = as<gen::Counit>(b[counit_on_left ? 0 : 1]);
      const auto* id = as<gen::Identity>(b[counit_on_left ? 1 : 0]);
      if (!c || !e || !id || e->space != c->space || id->space != c->space) return no_match();
      return matched(Diagram::identity({c->space}));
    };
  };
  rules.push_back(make_rule("R5-counit-left", SideCondition::none, 1, 2, counit_law(true),
                            one_space([](const SpaceLabel& s) {
                              return fragment({gen::Comult{s}}, {gen::Counit{s}, gen::Identity{s}});
                            })));
  rules.push_back(make_rule("R5-counit-right", SideCondition::none, 1, 2, counit_law(false),
                            one_space([](const SpaceLabel& s) {
                              return fragment({gen::Comult{s}}, {gen::Identity{s}, gen::Counit{s}});
                            })));

  // Re-associate to the right: m o (m (x) id) -> m o (id (x) m).
  rules.push_back(make_rule(
      "R5-assoc", SideCondition::none, 2, 1,
      [](Span a, Span b) {
        const auto* inner = as<gen::Mult>(a[0]);
        const auto* id = as<gen::Identity>(a[1]);
        const auto* outer = as<gen::Mult>(b[0]);
        if (!inner || !id || !outer || inner->space != outer->space || id->space != outer->space)
          return no_match();
        const auto& s = outer->space;
        return matched(Diagram::from_slices(
            {s, s, s}, {s}, {Slice{gen::Identity{s}, gen::Mult{s}}, Slice{gen::Mult{s}}}));
      },
      one_space([](const SpaceLabel& s) {
        return fragment({gen::Mult{s}, gen::Identity{s}}, {gen::Mult{s}});
      })));

  // (m-dagger (x) id) o m-dagger -> (id (x) m-dagger) o m-dagger.
  rules.push_back(make_rule(
      "R5-coassoc", SideCondition::none, 1, 2,
      [](Span a, Span b) {
        const auto* outer = as<gen::Comult>(a[0]);
        const auto* inner = as<gen::Comult>(b[0]);
        const auto* id = as<gen::Identity>(b[1]);
        if (!outer || !inner || !id || inner->space != outer->space || id->space != outer->space)
          return no_match();
        const auto& s = outer->space;
        return matched(Diagram::from_slices(
            {s}, {s, s, s}, {Slice{gen::Comult{s}}, Slice{gen::Identity{s}, gen::Comult{s}}}));
      },
      one_space([](const SpaceLabel& s) {
        return fragment({gen::Comult{s}}, {gen::Comult{s}, gen::Identity{s}});
      })));

  return rules;
}

}  // namespace detail

/// The shipped rules in priority order: point rules, function rules,
/// representation rules, then the Frobenius algebra laws.
inline const std::vector<RewriteRule>& rules_catalog() {
  static const std::vector<RewriteRule> catalog = detail::build_catalog();
  return catalog;
}

inline const RewriteRule& find_rule(std::string_view name,
                                    const std::vector<RewriteRule>& rules = rules_catalog()) {
  for (const auto& r : rules)
    if (r.name == name) return r;
  throw Error(ErrorCode::invalid_argument, "unknown rule '" + std::string(name) + "'");
}

struct RewriteStep {
  std::string rule;
  std::size_t slice = 0;
  std::size_t offset = 0;
  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
  Diagram initial;
  Diagram final_diagram;
};

struct NormalizeResult {
  Diagram diagram;
  RewriteTrace trace;
  /// Set when max_steps ran out while a rule still applied.
  bool budget_exhausted = false;
};

struct FoundMatch {
  const RewriteRule* rule;
  RewritePosition at;
  Diagram result;
};

/// First applicable rule in catalog order, at its lowest slice and leftmost
/// offset. Side-condition failures count as non-matches.
inline std::optional<FoundMatch> find_first_match(const Diagram& d,
                                                  const std::vector<RewriteRule>& rules) {
  for (const auto& rule : rules) {
    for (std::size_t s = 0; s + 1 < d.slices().size(); ++s) {
      for (std::size_t p = 0; p < d.slices()[s].size(); ++p) {
        RuleMatch m = try_rule(rule, d, {s, p});
        if (m.status == MatchStatus::matched) return FoundMatch{&rule, {s, p}, std::move(m.rhs)};
      }
    }
  }
  return std::nullopt;
}

/// Rewrites until no rule applies or max_steps rewrites have been made.
inline NormalizeResult normalize(const Diagram& d, std::size_t max_steps,
                                 const std::vector<RewriteRule>& rules = rules_catalog()) {
  if (max_steps < 1) throw Error(ErrorCode::invalid_argument, "max_steps must be at least 1");
  NormalizeResult result;
  result.trace.initial = d;
  Diagram current = d;
  while (true) {
    auto found = find_first_match(current, rules);
    if (!found) break;
    if (result.trace.steps.size() == max_steps) {
      result.budget_exhausted = true;
      break;
    }
    result.trace.steps.push_back({found->rule->name, found->at.slice, found->at.offset});
    current = std::move(found->result);
  }
  result.trace.final_diagram = current;
  result.diagram = std::move(current);
  return result;
}

/// Re-applies a trace's steps to its initial diagram.
inline Diagram replay(const RewriteTrace& trace,
                      const std::vector<RewriteRule>& rules = rules_catalog()) {
  Diagram d = trace.initial;
  for (const auto& step : trace.steps)
    d = apply_rule(find_rule(step.rule, rules), d, {step.slice, step.offset});
  return d;
}

namespace detail {

// Identity wires are free; classical points, characters and scalars are
// cheap; every other box costs two.
inline std::size_t measure_weight(const Generator& g) {
  if (is_identity(g)) return 0;
  if (std::holds_alternative<gen::Point>(g) || std::holds_alternative<gen::GroupUnit>(g) ||
      std::holds_alternative<gen::RepBox>(g)) return 1;
  if (const auto* c = std::get_if<gen::CustomBox>(&g); c && c->inputs.empty() && c->outputs.empty())
    return 1;
  return 2;
}

}  // namespace detail

/// (weighted generator count, sum over (co)multiplications of their distance
/// from the right edge of their slice). Every catalog rule strictly lowers it
/// lexicographically: (co)associativity moves the inner (co)multiplication
/// one wire to the right and leaves the weights alone; all other rules lower
/// the weights.
inline std::pair<std::size_t, std::size_t> rewrite_measure(const Diagram& d) {
  std::size_t weight = 0, potential = 0;
  for (const auto& slice : d.slices()) {
    const std::size_t width = slice_inputs(slice).size();
    std::size_t offset = 0;
    for (const auto& g : slice) {
      weight += detail::measure_weight(g);
      if (std::holds_alternative<gen::Mult>(g) || std::holds_alternative<gen::Comult>(g))
        potential += width - offset;
      offset += inputs_of(g).size();
    }
  }
  return {weight, potential};
}

struct SoundnessReport {
  std::string rule;
  std::size_t instantiations = 0;
  double max_deviation = 0.0;
  bool pass = false;
};

inline constexpr double kSoundnessTolerance = 1e-12;

/// Evaluates both sides of every instance of the rule over spaces of the
/// given sizes and records the largest entrywise deviation.
inline SoundnessReport check_rule_soundness(const RewriteRule& rule,
                                            const std::vector<std::size_t>& sizes) {
  SoundnessReport report{rule.name, 0, 0.0, false};
  bool all_matched = true;
  for (auto size : sizes) {
    if (size < 1) continue;
    std::mt19937_64 rng(detail::seed_for(rule.name, size));
    for (const auto& lhs : rule.instances(size, rng)) {
      ++report.instantiations;
      RuleMatch m = try_rule(rule, lhs, {0, 0});
      if (m.status != MatchStatus::matched || m.rhs.inputs() != lhs.inputs() ||
          m.rhs.outputs() != lhs.outputs()) {
        all_matched = false;
        continue;
      }
      report.max_deviation = std::max(report.max_deviation, max_abs_diff(eval(lhs), eval(m.rhs)));
    }
  }
  report.pass =
      all_matched && report.instantiations > 0 && report.max_deviation <= kSoundnessTolerance;
  return report;
}

}  // namespace grover_lab
