#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grover_lab/error.hpp"
#include "grover_lab/generator.hpp"
#include "grover_lab/space.hpp"

namespace grover_lab {

using Slice = std::vector<Generator>;

inline std::vector<SpaceLabel> slice_inputs(const Slice& slice) {
  std::vector<SpaceLabel> out;
  for (const auto& g : slice) {
    auto in = inputs_of(g);
    out.insert(out.end(), in.begin(), in.end());
  }
  return out;
}

inline std::vector<SpaceLabel> slice_outputs(const Slice& slice) {
  std::vector<SpaceLabel> out;
  for (const auto& g : slice) {
    auto o = outputs_of(g);
    out.insert(out.end(), o.begin(), o.end());
  }
  return out;
}

inline Slice identity_slice(const std::vector<SpaceLabel>& spaces) {
  Slice s;
  for (const auto& l : spaces) s.push_back(gen::Identity{l});
  return s;
}

/// A string diagram in slice normal form: layers applied bottom to top, each
/// layer a left-to-right list of generators. A diagram with no slices is the
/// identity on its wires; with no wires either it is the scalar 1.
class Diagram {
 public:
  Diagram() = default;

  /// Assembles a diagram without checking inter-slice typing; call
  /// validate() on the result when the parts are untrusted. Each generator
  /// must satisfy its own invariants.
  static Diagram from_slices(std::vector<SpaceLabel> inputs, std::vector<SpaceLabel> outputs,
                             std::vector<Slice> slices) {
    for (const auto& s : slices)
      for (const auto& g : s) check_generator(g);
    Diagram d;
    d.inputs_ = wires(inputs);
    d.outputs_ = wires(outputs);
    d.slices_ = std::move(slices);
    return d;
  }

  /// The identity on the given wires (no slices).
  static Diagram identity(const std::vector<SpaceLabel>& spaces) {
    Diagram d;
    d.inputs_ = wires(spaces);
    d.outputs_ = d.inputs_;
    return d;
  }

  const std::vector<SpaceLabel>& inputs() const noexcept { return inputs_; }
  const std::vector<SpaceLabel>& outputs() const noexcept { return outputs_; }
  const std::vector<Slice>& slices() const noexcept { return slices_; }

  bool is_closed() const noexcept { return inputs_.empty() && outputs_.empty(); }
  bool is_empty() const noexcept { return is_closed() && slices_.empty(); }

  std::size_t generator_count() const {
    std::size_t n = 0;
    for (const auto& s : slices_) n += s.size();
    return n;
  }

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::vector<SpaceLabel> inputs_;
  std::vector<SpaceLabel> outputs_;
  std::vector<Slice> slices_;
};

struct WireMismatch {
  /// Index of the slice whose inputs were checked; slices().size() denotes
  /// the diagram's output boundary.
  std::size_t slice_index = 0;
  std::size_t wire_position = 0;
  std::optional<SpaceLabel> expected;
  std::optional<SpaceLabel> found;
};

struct TypingReport {
  std::vector<WireMismatch> mismatches;
  bool ok() const noexcept { return mismatches.empty(); }

  std::string to_string() const {
    if (ok()) return "ok";
    std::string s;
    for (const auto& m : mismatches) {
      if (!s.empty()) s += "; ";
      s += "slice " + std::to_string(m.slice_index) + " wire " +
           std::to_string(m.wire_position) + ": expected " +
           (m.expected ? m.expected->to_string() : "<none>") + ", found " +
           (m.found ? m.found->to_string() : "<none>");
    }
    return s;
  }
};

namespace detail {

inline void compare_wires(std::size_t slice_index, const std::vector<SpaceLabel>& expected,
                          const std::vector<SpaceLabel>& found, TypingReport& report) {
  const std::size_t n = std::max(expected.size(), found.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<SpaceLabel> e, f;
    if (i < expected.size()) e = expected[i];
    if (i < found.size()) f = found[i];
    if (e != f) report.mismatches.push_back({slice_index, i, e, f});
  }
}

inline void check_entry_cap(std::size_t rows, std::size_t cols, std::size_t max_entries,
                            const char* what) {
  if (saturating_mul(rows, cols) > max_entries)
    throw Error(ErrorCode::cap_exceeded,
                std::string(what) + ": " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " exceeds the cap of " + std::to_string(max_entries) + " entries");
}

}  // namespace detail

/// Checks that adjacent slices agree on their shared wires, and that the
/// first and last slices agree with the diagram's boundary.
inline TypingReport validate(const Diagram& d) {
  TypingReport report;
  std::vector<SpaceLabel> carried = d.inputs();
  for (std::size_t i = 0; i < d.slices().size(); ++i) {
    detail::compare_wires(i, carried, slice_inputs(d.slices()[i]), report);
    carried = slice_outputs(d.slices()[i]);
  }
  detail::compare_wires(d.slices().size(), carried, d.outputs(), report);
  return report;
}

/// Throws cap-exceeded if any slice boundary or the whole diagram would
/// evaluate to more than max_entries matrix entries.
inline void check_dimension_cap(const Diagram& d, std::size_t max_entries = kDefaultMaxEntries) {
  const std::size_t in = dimension_product(d.inputs());
  detail::check_entry_cap(dimension_product(d.outputs()), in, max_entries, "diagram");
  for (const auto& s : d.slices()) {
    detail::check_entry_cap(dimension_product(slice_outputs(s)),
                            dimension_product(slice_inputs(s)), max_entries, "slice");
    detail::check_entry_cap(dimension_product(slice_outputs(s)), in, max_entries,
                            "partial evaluation");
  }
}

/// A one-generator diagram. Identity on the trivial space is the empty
/// diagram.
inline Diagram make_generator(const Generator& g) {
  check_generator(g);
  if (const auto* id = std::get_if<gen::Identity>(&g); id && id->space.is_trivial())
    return Diagram{};
  return Diagram::from_slices(inputs_of(g), outputs_of(g), {Slice{g}});
}

/// Sequential composition: `first` is applied, then `then`.
inline Diagram compose(const Diagram& first, const Diagram& then,
                       std::size_t max_entries = kDefaultMaxEntries) {
  if (first.outputs() != then.inputs()) {
    TypingReport r;
    detail::compare_wires(0, first.outputs(), then.inputs(), r);
    const auto& m = r.mismatches.front();
    throw Error(ErrorCode::type_mismatch,
                "compose: wire " + std::to_string(m.wire_position) + " has " +
                    (m.expected ? m.expected->to_string() : "<none>") + " on the left and " +
                    (m.found ? m.found->to_string() : "<none>") + " on the right");
  }
  std::vector<Slice> slices = first.slices();
  slices.insert(slices.end(), then.slices().begin(), then.slices().end());
  Diagram d = Diagram::from_slices(first.inputs(), then.outputs(), std::move(slices));
  check_dimension_cap(d, max_entries);
  return d;
}

/// Composes a whole chain left to right.
inline Diagram compose_all(std::initializer_list<Diagram> chain,
                           std::size_t max_entries = kDefaultMaxEntries) {
  auto it = chain.begin();
  Diagram d = *it++;
  for (; it != chain.end(); ++it) d = compose(d, *it, max_entries);
  return d;
}

namespace detail {

// The slice list of d padded with identity layers to `length` slices.
inline std::vector<Slice> padded_slices(const Diagram& d, std::size_t length) {
  std::vector<Slice> s = d.slices();
  while (s.size() < length) s.push_back(identity_slice(d.outputs()));
  return s;
}

}  // namespace detail

/// Side-by-side placement. The shorter diagram is padded with identities.
inline Diagram tensor(const Diagram& left, const Diagram& right,
                      std::size_t max_entries = kDefaultMaxEntries) {
  const std::size_t length = std::max(left.slices().size(), right.slices().size());
  auto ls = detail::padded_slices(left, length);
  auto rs = detail::padded_slices(right, length);
  std::vector<Slice> slices(length);
  for (std::size_t i = 0; i < length; ++i) {
    slices[i] = std::move(ls[i]);
    slices[i].insert(slices[i].end(), rs[i].begin(), rs[i].end());
  }
  auto in = left.inputs();
  in.insert(in.end(), right.inputs().begin(), right.inputs().end());
  auto out = left.outputs();
  out.insert(out.end(), right.outputs().begin(), right.outputs().end());
  Diagram d = Diagram::from_slices(std::move(in), std::move(out), std::move(slices));
  check_dimension_cap(d, max_entries);
  return d;
}

/// Mirror image: slice order reversed, every generator replaced by its
/// adjoint.
inline Diagram dagger(const Diagram& d) {
  std::vector<Slice> slices;
  slices.reserve(d.slices().size());
  for (auto it = d.slices().rbegin(); it != d.slices().rend(); ++it) {
    Slice s;
    s.reserve(it->size());
    for (const auto& g : *it) s.push_back(adjoint(g));
    slices.push_back(std::move(s));
  }
  return Diagram::from_slices(d.outputs(), d.inputs(), std::move(slices));
}

}  // namespace grover_lab
