#pragma once

#include "grover_lab/dense_tensor.hpp"
#include "grover_lab/generator.hpp"

namespace grover_lab {

/// Matrix of a single generator. Rows index the (row-major) tensor product of
/// the output wires, columns the tensor product of the input wires.
inline DenseTensor eval_generator(const Generator& g) {
  check_generator(g);
  return std::visit(
      overloaded{
          [](const gen::Identity& x) { return DenseTensor::identity(x.space.dimension); },
          [](const gen::Mult& x) {
            const std::size_t d = x.space.dimension;
            DenseTensor t(d, d * d);
            for (std::size_t i = 0; i < d; ++i) t(i, i * d + i) = 1.0;
            return t;
          },
          [](const gen::Comult& x) {
            const std::size_t d = x.space.dimension;
            DenseTensor t(d * d, d);
            for (std::size_t i = 0; i < d; ++i) t(i * d + i, i) = 1.0;
            return t;
          },
          [](const gen::Unit& x) {
            return DenseTensor(x.space.dimension, 1,
                               std::vector<Complex>(x.space.dimension, Complex{1.0, 0.0}));
          },
          [](const gen::Counit& x) {
            return DenseTensor(1, x.space.dimension,
                               std::vector<Complex>(x.space.dimension, Complex{1.0, 0.0}));
          },
          [](const gen::FunctionBox& x) {
            DenseTensor t(x.codomain.dimension, x.domain.dimension);
            for (std::size_t s = 0; s < x.table.size(); ++s) t(x.table[s], s) = 1.0;
            return t;
          },
          [](const gen::Point& x) {
            DenseTensor t(x.space.dimension, 1);
            t(x.element, 0) = 1.0;
            return t;
          },
          [](const gen::PointEffect& x) {
            DenseTensor t(1, x.space.dimension);
            t(0, x.element) = 1.0;
            return t;
          },
          [](const gen::GroupMult& x) {
            const GroupSpec& grp = *x.group;
            const std::size_t d = grp.order;
            DenseTensor t(d, d * d);
            for (std::size_t a = 0; a < d; ++a)
              for (std::size_t b = 0; b < d; ++b) t(grp.multiply(a, b), a * d + b) = 1.0;
            return t;
          },
          [](const gen::GroupUnit& x) {
            DenseTensor t(x.group->order, 1);
            t(x.group->identity_index, 0) = 1.0;
            return t;
          },
          [](const gen::RepBox& x) {
            const auto& row = (*x.group->character_table)[x.irrep];
            return DenseTensor(1, x.group->order, row);
          },
          [](const gen::IrrepSum& x) {
            const GroupSpec& grp = *x.group;
            DenseTensor t(1, grp.order);
            for (std::size_t i = 0; i < grp.irrep_count(); ++i) {
              const double dim = static_cast<double>(grp.irrep_dimension(i));
              for (std::size_t g = 0; g < grp.order; ++g)
                t(0, g) += dim * (*grp.character_table)[i][g];
            }
            return t;
          },
          [](const gen::CustomBox& x) { return x.matrix; },
          [](const gen::Swap& x) {
            const std::size_t da = x.left.is_trivial() ? 1 : x.left.dimension;
            const std::size_t db = x.right.is_trivial() ? 1 : x.right.dimension;
            DenseTensor t(da * db, da * db);
            for (std::size_t a = 0; a < da; ++a)
              for (std::size_t b = 0; b < db; ++b) t(b * da + a, a * db + b) = 1.0;
            return t;
          },
      },
      g);
}

}  // namespace grover_lab
