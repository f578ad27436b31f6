#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grover_lab/diagram.hpp"
#include "grover_lab/eval.hpp"
#include "grover_lab/generator.hpp"
#include "grover_lab/space.hpp"

namespace grover_lab {

/// The search space of n qubits, labelled "S".
inline SpaceLabel search_space(unsigned n) { return SpaceLabel::qubit_register("S", n); }

/// Indicator f : S -> Z_2 with f(x) = 1 exactly on the marked elements.
inline gen::FunctionBox indicator_function(const SpaceLabel& domain,
                                           std::span<const std::uint64_t> marked) {
  gen::FunctionBox f{domain, z2_group()->space(), std::vector<std::size_t>(domain.dimension, 0)};
  for (auto x : marked) {
    if (x >= domain.dimension)
      throw Error(ErrorCode::invalid_f, "marked element " + std::to_string(x) +
                                            " outside a space of dimension " +
                                            std::to_string(domain.dimension));
    f.table[x] = 1;
  }
  return f;
}

inline gen::FunctionBox indicator_function(unsigned n, std::span<const std::uint64_t> marked) {
  return indicator_function(search_space(n), marked);
}

namespace detail {

inline void check_oracle_function(const gen::FunctionBox& f) {
  try {
    check_generator(f);
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_f, e.what());
  }
  if (f.codomain != z2_group()->space())
    throw Error(ErrorCode::invalid_f,
                "oracle function must land in " + z2_group()->space().to_string() + ", not " +
                    f.codomain.to_string());
}

}  // namespace detail

/// The phase oracle x -> (-1)^f(x) x as a diagram: copy the input, push one
/// copy through f, then through the sign character of Z_2.
inline Diagram phase_oracle_block(const gen::FunctionBox& f) {
  detail::check_oracle_function(f);
  const SpaceLabel& s = f.domain;
  return Diagram::from_slices({s}, {s},
                              {Slice{gen::Comult{s}}, Slice{gen::Identity{s}, f},
                               Slice{gen::Identity{s}, gen::RepBox{z2_group(), kSignIrrep, 1}}});
}

struct WeightedDiagram {
  Complex weight;
  Diagram diagram;
};

/// Inversion about the mean written as -1 * id + (2/|S|) * (u o u-dagger).
/// The second term carries its 2/|S| as an explicit scalar box.
inline std::vector<WeightedDiagram> diffusion_decomposition(const SpaceLabel& s) {
  const double n = static_cast<double>(s.dimension);
  Diagram mean = Diagram::from_slices(
      {s}, {s}, {Slice{gen::Counit{s}, scalar_box(2.0 / n, "2/|S|")}, Slice{gen::Unit{s}}});
  return {{-1.0, Diagram::identity({s})}, {1.0, std::move(mean)}};
}

/// The diffusion operator as a single box whose matrix is the weighted sum of
/// the evaluated decomposition.
inline Diagram diffusion_block(const SpaceLabel& s) {
  const auto parts = diffusion_decomposition(s);
  DenseTensor m(s.dimension, s.dimension);
  for (const auto& p : parts) m = m + scaled(eval(p.diagram), p.weight);
  return make_generator(gen::CustomBox{"D", {s}, {s}, std::move(m)});
}

/// Normalized uniform superposition: u followed by a 1/sqrt|S| scalar.
inline Diagram uniform_preparation(const SpaceLabel& s) {
  const double n = static_cast<double>(s.dimension);
  return Diagram::from_slices({}, {s},
                              {Slice{gen::Unit{s}, scalar_box(1.0 / std::sqrt(n), "1/sqrt|S|")}});
}

/// The k-step Grover algorithm as a state 1 -> S. Measuring it in the
/// computational basis gives the search outcome distribution.
inline Diagram build_grover_diagram(unsigned n, const gen::FunctionBox& f, std::size_t k,
                                    std::size_t max_entries = kDefaultMaxEntries) {
  detail::check_oracle_function(f);
  if (k < 1) throw Error(ErrorCode::invalid_argument, "iteration count must be at least 1");
  if (n >= 63 || f.domain.kind != SpaceKind::qubit_register ||
      f.domain.dimension != (std::size_t{1} << n))
    throw Error(ErrorCode::invalid_f, "oracle domain " + f.domain.to_string() +
                                          " is not a register of " + std::to_string(n) +
                                          " qubits");
  const SpaceLabel& s = f.domain;
  // The widest slice is id (x) f : S (x) S -> S (x) Z2.
  detail::check_entry_cap(saturating_mul(2, s.dimension), saturating_mul(s.dimension, s.dimension), max_entries,
                          "Grover diagram");
  const Diagram oracle = phase_oracle_block(f);
  const Diagram diffusion = diffusion_block(s);
  Diagram d = uniform_preparation(s);
  for (std::size_t i = 0; i < k; ++i) {
    d = compose(d, oracle, max_entries);
    d = compose(d, diffusion, max_entries);
  }
  return d;
}

/// Closed diagram whose value is the sum over x in S of sigma(f(x)), sigma the
/// sign character: u, then the phase oracle, then u-dagger.
inline Diagram sigma_sum_diagram(const gen::FunctionBox& f) {
  const SpaceLabel& s = f.domain;
  return compose_all({make_generator(gen::Unit{s}), phase_oracle_block(f),
                      make_generator(gen::Counit{s})});
}

}  // namespace grover_lab
