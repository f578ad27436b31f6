#pragma once

#include <complex>
#include <string>

#include "grover_lab/dense_tensor.hpp"
#include "grover_lab/diagram.hpp"
#include "grover_lab/error.hpp"
#include "grover_lab/generator.hpp"

namespace grover_lab {

/// Matrix of one slice: the Kronecker product of its generators, left to
/// right. An empty slice is the scalar 1.
inline DenseTensor eval_slice(const Slice& slice) {
  DenseTensor acc;
  for (const auto& g : slice) acc = kron(acc, eval_generator(g));
  return acc;
}

/// Functorial semantics: slices are evaluated in order and multiplied onto
/// the running matrix. The diagram must validate.
inline DenseTensor eval(const Diagram& d, std::size_t max_entries = kDefaultMaxEntries) {
  if (auto report = validate(d); !report.ok())
    throw Error(ErrorCode::type_error, "cannot evaluate ill-typed diagram: " + report.to_string());
  check_dimension_cap(d, max_entries);
  DenseTensor acc = DenseTensor::identity(dimension_product(d.inputs()));
  for (const auto& slice : d.slices()) acc = matmul(eval_slice(slice), acc);
  return acc;
}

/// The value of a closed diagram.
inline Complex scalar_of(const Diagram& d, std::size_t max_entries = kDefaultMaxEntries) {
  if (!d.is_closed())
    throw Error(ErrorCode::not_closed,
                "diagram has " + std::to_string(d.inputs().size()) + " inputs and " +
                    std::to_string(d.outputs().size()) + " outputs");
  return eval(d, max_entries)(0, 0);
}

}  // namespace grover_lab
