#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "grover_lab/dense_tensor.hpp"
#include "grover_lab/error.hpp"
#include "grover_lab/space.hpp"

namespace grover_lab {

namespace gen {

struct Identity {
  SpaceLabel space;
  friend bool operator==(const Identity&, const Identity&) = default;
};
/// m : S (x) S -> S, |i>|j> -> delta_ij |i>.
struct Mult {
  SpaceLabel space;
  friend bool operator==(const Mult&, const Mult&) = default;
};
/// u : 1 -> S, the sum of all basis vectors.
struct Unit {
  SpaceLabel space;
  friend bool operator==(const Unit&, const Unit&) = default;
};
struct Comult {
  SpaceLabel space;
  friend bool operator==(const Comult&, const Comult&) = default;
};
struct Counit {
  SpaceLabel space;
  friend bool operator==(const Counit&, const Counit&) = default;
};
/// A total function between finite sets, stored as its value table.
struct FunctionBox {
  SpaceLabel domain;
  SpaceLabel codomain;
  std::vector<std::size_t> table;
  friend bool operator==(const FunctionBox&, const FunctionBox&) = default;
};
/// Classical point |x> : 1 -> S.
struct Point {
  SpaceLabel space;
  std::size_t element = 0;
  friend bool operator==(const Point&, const Point&) = default;
};
/// <x| : S -> 1.
struct PointEffect {
  SpaceLabel space;
  std::size_t element = 0;
  friend bool operator==(const PointEffect&, const PointEffect&) = default;
};
/// Linearized group multiplication G (x) G -> G.
struct GroupMult {
  GroupRef group;
  friend bool operator==(const GroupMult&, const GroupMult&) = default;
};
/// The unit element as a point 1 -> G.
struct GroupUnit {
  GroupRef group;
  friend bool operator==(const GroupUnit&, const GroupUnit&) = default;
};
/// The character of an irrep, as an effect G -> 1 sending |g> to chi(g).
struct RepBox {
  GroupRef group;
  std::size_t irrep = 0;
  std::size_t dimension = 1;
  friend bool operator==(const RepBox&, const RepBox&) = default;
};
/// G -> 1 sending |g> to sum over irreps of dim(sigma) * chi_sigma(g).
struct IrrepSum {
  GroupRef group;
  friend bool operator==(const IrrepSum&, const IrrepSum&) = default;
};
/// An arbitrary linear map with an explicit matrix. With no wires at all it
/// is a scalar.
struct CustomBox {
  std::string name;
  std::vector<SpaceLabel> inputs;
  std::vector<SpaceLabel> outputs;
  DenseTensor matrix;
  friend bool operator==(const CustomBox&, const CustomBox&) = default;
};
struct Swap {
  SpaceLabel left;
  SpaceLabel right;
  friend bool operator==(const Swap&, const Swap&) = default;
};

}  // namespace gen

using Generator = std::variant<gen::Identity, gen::Mult, gen::Unit, gen::Comult, gen::Counit,
                               gen::FunctionBox, gen::Point, gen::PointEffect, gen::GroupMult,
                               gen::GroupUnit, gen::RepBox, gen::IrrepSum, gen::CustomBox,
                               gen::Swap>;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline std::string_view variant_name(const Generator& g) {
  return std::visit(
      overloaded{
          [](const gen::Identity&) { return std::string_view("Identity"); },
          [](const gen::Mult&) { return std::string_view("Mult"); },
          [](const gen::Unit&) { return std::string_view("Unit"); },
          [](const gen::Comult&) { return std::string_view("Comult"); },
          [](const gen::Counit&) { return std::string_view("Counit"); },
          [](const gen::FunctionBox&) { return std::string_view("FunctionBox"); },
          [](const gen::Point&) { return std::string_view("Point"); },
          [](const gen::PointEffect&) { return std::string_view("PointEffect"); },
          [](const gen::GroupMult&) { return std::string_view("GroupMult"); },
          [](const gen::GroupUnit&) { return std::string_view("GroupUnit"); },
          [](const gen::RepBox&) { return std::string_view("RepBox"); },
          [](const gen::IrrepSum&) { return std::string_view("IrrepSum"); },
          [](const gen::CustomBox&) { return std::string_view("CustomBox"); },
          [](const gen::Swap&) { return std::string_view("Swap"); },
      },
      g);
}

/// Drops the monoidal unit from a wire list.
inline std::vector<SpaceLabel> wires(std::initializer_list<SpaceLabel> labels) {
  std::vector<SpaceLabel> out;
  for (const auto& l : labels)
    if (!l.is_trivial()) out.push_back(l);
  return out;
}

inline std::vector<SpaceLabel> wires(const std::vector<SpaceLabel>& labels) {
  std::vector<SpaceLabel> out;
  for (const auto& l : labels)
    if (!l.is_trivial()) out.push_back(l);
  return out;
}

inline std::vector<SpaceLabel> inputs_of(const Generator& g) {
  return std::visit(
      overloaded{
          [](const gen::Identity& x) { return wires({x.space}); },
          [](const gen::Mult& x) { return wires({x.space, x.space}); },
          [](const gen::Unit&) { return std::vector<SpaceLabel>{}; },
          [](const gen::Comult& x) { return wires({x.space}); },
          [](const gen::Counit& x) { return wires({x.space}); },
          [](const gen::FunctionBox& x) { return wires({x.domain}); },
          [](const gen::Point&) { return std::vector<SpaceLabel>{}; },
          [](const gen::PointEffect& x) { return wires({x.space}); },
          [](const gen::GroupMult& x) { return wires({x.group->space(), x.group->space()}); },
          [](const gen::GroupUnit&) { return std::vector<SpaceLabel>{}; },
          [](const gen::RepBox& x) { return wires({x.group->space()}); },
          [](const gen::IrrepSum& x) { return wires({x.group->space()}); },
          [](const gen::CustomBox& x) { return wires(x.inputs); },
          [](const gen::Swap& x) { return wires({x.left, x.right}); },
      },
      g);
}

inline std::vector<SpaceLabel> outputs_of(const Generator& g) {
  return std::visit(
      overloaded{
          [](const gen::Identity& x) { return wires({x.space}); },
          [](const gen::Mult& x) { return wires({x.space}); },
          [](const gen::Unit& x) { return wires({x.space}); },
          [](const gen::Comult& x) { return wires({x.space, x.space}); },
          [](const gen::Counit&) { return std::vector<SpaceLabel>{}; },
          [](const gen::FunctionBox& x) { return wires({x.codomain}); },
          [](const gen::Point& x) { return wires({x.space}); },
          [](const gen::PointEffect&) { return std::vector<SpaceLabel>{}; },
          [](const gen::GroupMult& x) { return wires({x.group->space()}); },
          [](const gen::GroupUnit& x) { return wires({x.group->space()}); },
          [](const gen::RepBox&) { return std::vector<SpaceLabel>{}; },
          [](const gen::IrrepSum&) { return std::vector<SpaceLabel>{}; },
          [](const gen::CustomBox& x) { return wires(x.outputs); },
          [](const gen::Swap& x) { return wires({x.right, x.left}); },
      },
      g);
}

inline std::size_t dimension_product(const std::vector<SpaceLabel>& labels) {
  std::size_t d = 1;
  for (const auto& l : labels) d = saturating_mul(d, l.dimension);
  return d;
}

inline bool is_identity(const Generator& g) { return std::holds_alternative<gen::Identity>(g); }

/// Throws invalid-variant if the generator violates its invariants.
inline void check_generator(const Generator& g) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::invalid_variant, std::string(variant_name(g)) + ": " + why);
  };
  auto check_space = [&](const SpaceLabel& s) {
    try {
      s.check();
    } catch (const Error& e) {
      fail(e.what());
    }
  };
  auto check_group = [&](const GroupRef& gr) {
    if (!gr) fail("missing group");
  };
  std::visit(
      overloaded{
          [&](const gen::FunctionBox& x) {
            check_space(x.domain);
            check_space(x.codomain);
            if (x.table.size() != x.domain.dimension)
              fail("table has " + std::to_string(x.table.size()) + " entries, domain has " +
                   std::to_string(x.domain.dimension) + " elements");
            for (auto v : x.table)
              if (v >= x.codomain.dimension)
                fail("value " + std::to_string(v) + " outside codomain of dimension " +
                     std::to_string(x.codomain.dimension));
          },
          [&](const gen::Point& x) {
            check_space(x.space);
            if (x.element >= x.space.dimension)
              fail("element " + std::to_string(x.element) + " out of range for dimension " +
                   std::to_string(x.space.dimension));
          },
          [&](const gen::PointEffect& x) {
            check_space(x.space);
            if (x.element >= x.space.dimension)
              fail("element " + std::to_string(x.element) + " out of range for dimension " +
                   std::to_string(x.space.dimension));
          },
          [&](const gen::GroupMult& x) { check_group(x.group); },
          [&](const gen::GroupUnit& x) { check_group(x.group); },
          [&](const gen::RepBox& x) {
            check_group(x.group);
            if (x.irrep >= x.group->irrep_count())
              fail("irrep index " + std::to_string(x.irrep) + " not in character table of " +
                   x.group->name);
            if (x.group->irrep_dimension(x.irrep) != x.dimension)
              fail("declared dimension " + std::to_string(x.dimension) +
                   " differs from character at identity");
          },
          [&](const gen::IrrepSum& x) {
            check_group(x.group);
            if (!x.group->character_table) fail("group has no character table");
          },
          [&](const gen::CustomBox& x) {
            for (const auto& s : x.inputs) check_space(s);
            for (const auto& s : x.outputs) check_space(s);
            if (x.matrix.rows() != dimension_product(x.outputs) ||
                x.matrix.cols() != dimension_product(x.inputs))
              fail("matrix shape " + std::to_string(x.matrix.rows()) + "x" +
                   std::to_string(x.matrix.cols()) + " does not match its wires");
          },
          [&](const gen::Swap& x) {
            check_space(x.left);
            check_space(x.right);
          },
          [&](const auto& x) { check_space(x.space); },
      },
      g);
}

/// A closed CustomBox carrying a scalar factor.
inline Generator scalar_box(Complex value, std::string name = "scalar") {
  return gen::CustomBox{std::move(name), {}, {}, DenseTensor::scalar(value)};
}

inline std::string toggle_dagger_suffix(const std::string& name) {
  static constexpr std::string_view dag = "†";
  if (name.size() >= dag.size() && name.compare(name.size() - dag.size(), dag.size(), dag) == 0)
    return name.substr(0, name.size() - dag.size());
  return name + std::string(dag);
}

inline DenseTensor eval_generator(const Generator& g);

/// The adjoint generator. Variants without a named adjoint become
/// CustomBoxes carrying the conjugate-transposed matrix.
inline Generator adjoint(const Generator& g) {
  auto as_custom = [&](std::string name) -> Generator {
    return gen::CustomBox{std::move(name), outputs_of(g), inputs_of(g),
                          adjoint(eval_generator(g))};
  };
  return std::visit(
      overloaded{
          [](const gen::Identity& x) -> Generator { return x; },
          [](const gen::Mult& x) -> Generator { return gen::Comult{x.space}; },
          [](const gen::Comult& x) -> Generator { return gen::Mult{x.space}; },
          [](const gen::Unit& x) -> Generator { return gen::Counit{x.space}; },
          [](const gen::Counit& x) -> Generator { return gen::Unit{x.space}; },
          [](const gen::Point& x) -> Generator { return gen::PointEffect{x.space, x.element}; },
          [](const gen::PointEffect& x) -> Generator { return gen::Point{x.space, x.element}; },
          [](const gen::GroupUnit& x) -> Generator {
            return gen::PointEffect{x.group->space(), x.group->identity_index};
          },
          [](const gen::Swap& x) -> Generator { return gen::Swap{x.right, x.left}; },
          [](const gen::CustomBox& x) -> Generator {
            return gen::CustomBox{toggle_dagger_suffix(x.name), x.outputs, x.inputs,
                                  adjoint(x.matrix)};
          },
          [&](const gen::FunctionBox&) { return as_custom("FunctionBox†"); },
          [&](const gen::GroupMult&) { return as_custom("GroupMult†"); },
          [&](const gen::RepBox&) { return as_custom("RepBox†"); },
          [&](const gen::IrrepSum&) { return as_custom("IrrepSum†"); },
      },
      g);
}

}  // namespace grover_lab

#include "grover_lab/generator_eval.hpp"
