#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grover_lab/error.hpp"

namespace grover_lab {

enum class SpaceKind { set, group, qubit_register, trivial };

inline std::string_view kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::set: return "set";
    case SpaceKind::group: return "group";
    case SpaceKind::qubit_register: return "qubit-register";
    case SpaceKind::trivial: return "trivial";
  }
  return "set";
}

inline SpaceKind parse_kind(std::string_view name) {
  if (name == "set") return SpaceKind::set;
  if (name == "group") return SpaceKind::group;
  if (name == "qubit-register") return SpaceKind::qubit_register;
  if (name == "trivial") return SpaceKind::trivial;
  throw Error(ErrorCode::parse_error, "unknown space kind '" + std::string(name) + "'");
}

/// The label of a wire: the free vector space on a finite set, a group, a
/// qubit register or the one-dimensional unit space.
struct SpaceLabel {
  SpaceKind kind = SpaceKind::trivial;
  std::string name = "1";
  std::size_t dimension = 1;

  static SpaceLabel set(std::string name, std::size_t dimension) {
    return make(SpaceKind::set, std::move(name), dimension);
  }
  static SpaceLabel group(std::string name, std::size_t order) {
    return make(SpaceKind::group, std::move(name), order);
  }
  static SpaceLabel qubit_register(std::string name, unsigned qubits) {
    if (qubits >= 63) throw Error(ErrorCode::cap_exceeded, "qubit register too wide");
    return make(SpaceKind::qubit_register, std::move(name), std::size_t{1} << qubits);
  }
  static SpaceLabel trivial() { return {}; }

  /// Throws invalid-argument unless the label's invariants hold.
  static SpaceLabel make(SpaceKind kind, std::string name, std::size_t dimension) {
    SpaceLabel label{kind, std::move(name), dimension};
    label.check();
    return label;
  }

  void check() const {
    if (dimension < 1)
      throw Error(ErrorCode::invalid_argument, "space '" + name + "' has dimension 0");
    if (kind == SpaceKind::trivial && dimension != 1)
      throw Error(ErrorCode::invalid_argument, "trivial space must have dimension 1");
    if (kind == SpaceKind::qubit_register && !std::has_single_bit(dimension))
      throw Error(ErrorCode::invalid_argument,
                  "qubit-register '" + name + "' dimension is not a power of two");
    if (name.empty()) throw Error(ErrorCode::invalid_argument, "space name is empty");
  }

  bool is_trivial() const noexcept { return kind == SpaceKind::trivial; }

  std::string to_string() const {
    return name + ":" + std::string(kind_name(kind)) + "[" + std::to_string(dimension) + "]";
  }

  friend bool operator==(const SpaceLabel&, const SpaceLabel&) = default;
};

/// A finite group given by its multiplication table, with an optional
/// character table (one row per irreducible representation, one column per
/// element).
struct GroupSpec {
  std::string name;
  std::size_t order = 1;
  std::vector<std::vector<std::size_t>> multiplication_table;
  std::size_t identity_index = 0;
  std::optional<std::vector<std::vector<std::complex<double>>>> character_table;

  SpaceLabel space() const { return SpaceLabel{SpaceKind::group, name, order}; }

  std::size_t multiply(std::size_t g, std::size_t h) const {
    return multiplication_table[g][h];
  }

  std::size_t irrep_count() const {
    return character_table ? character_table->size() : 0;
  }

  /// Dimension of irrep i, read off the character at the identity.
  std::size_t irrep_dimension(std::size_t i) const {
    return static_cast<std::size_t>(std::lround((*character_table)[i][identity_index].real()));
  }

  /// Index of the irrep whose character is identically 1, if any.
  std::optional<std::size_t> trivial_irrep() const {
    if (!character_table) return std::nullopt;
    for (std::size_t i = 0; i < character_table->size(); ++i) {
      bool all_one = true;
      for (const auto& v : (*character_table)[i])
        if (std::abs(v - 1.0) > 1e-12) all_one = false;
      if (all_one) return i;
    }
    return std::nullopt;
  }

  void check() const {
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::invalid_argument, "group '" + name + "': " + why);
    };
    if (name.empty()) fail("empty name");
    if (order < 1) fail("order must be positive");
    if (multiplication_table.size() != order) fail("table row count differs from order");
    for (const auto& row : multiplication_table) {
      if (row.size() != order) fail("table column count differs from order");
      std::vector<bool> seen(order, false);
      for (auto v : row) {
        if (v >= order || seen[v]) fail("table rows are not permutations");
        seen[v] = true;
      }
    }
    for (std::size_t c = 0; c < order; ++c) {
      std::vector<bool> seen(order, false);
      for (std::size_t r = 0; r < order; ++r) {
        const auto v = multiplication_table[r][c];
        if (seen[v]) fail("table columns are not permutations");
        seen[v] = true;
      }
    }
    if (identity_index >= order) fail("identity index out of range");
    for (std::size_t g = 0; g < order; ++g)
      if (multiply(identity_index, g) != g || multiply(g, identity_index) != g)
        fail("identity is not a two-sided unit");
    if (!character_table) return;
    const auto& chi = *character_table;
    for (const auto& row : chi)
      if (row.size() != order) fail("character row length differs from order");
    for (std::size_t i = 0; i < chi.size(); ++i)
      for (std::size_t j = 0; j < chi.size(); ++j) {
        std::complex<double> acc{};
        for (std::size_t g = 0; g < order; ++g) acc += chi[i][g] * std::conj(chi[j][g]);
        const double expected = i == j ? static_cast<double>(order) : 0.0;
        if (std::abs(acc - expected) > 1e-9) fail("character table is not orthogonal");
      }
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Shared immutable handle to a group; compares by value.
class GroupRef {
 public:
  GroupRef() = default;
  explicit GroupRef(GroupSpec spec) {
    spec.check();
    spec_ = std::make_shared<const GroupSpec>(std::move(spec));
  }

  const GroupSpec& operator*() const { return *spec_; }
  const GroupSpec* operator->() const { return spec_.get(); }
  explicit operator bool() const { return static_cast<bool>(spec_); }

  friend bool operator==(const GroupRef& a, const GroupRef& b) {
    if (a.spec_ == b.spec_) return true;
    if (!a.spec_ || !b.spec_) return false;
    return *a.spec_ == *b.spec_;
  }

 private:
  std::shared_ptr<const GroupSpec> spec_;
};

namespace detail {

// exp(2*pi*i*num/den), exact at multiples of a quarter turn.
inline std::complex<double> root_of_unity(std::size_t num, std::size_t den) {
  const std::size_t r = num % den;
  if ((4 * r) % den == 0) {
    switch ((4 * r) / den) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

/// Z_n with the n one-dimensional characters chi_j(g) = exp(2 pi i j g / n).
inline GroupSpec cyclic_group_spec(std::size_t n, std::string name = "") {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "cyclic group order must be positive");
  GroupSpec g;
  g.name = name.empty() ? "Z" + std::to_string(n) : std::move(name);
  g.order = n;
  g.identity_index = 0;
  g.multiplication_table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g.multiplication_table[a][b] = (a + b) % n;
  std::vector<std::vector<std::complex<double>>> chi(n, std::vector<std::complex<double>>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t x = 0; x < n; ++x) chi[j][x] = detail::root_of_unity(j * x, n);
  g.character_table = std::move(chi);
  return g;
}

inline GroupRef cyclic_group(std::size_t n) { return GroupRef(cyclic_group_spec(n)); }

/// Z_2 = {0, 1}; irrep 0 is trivial, irrep 1 is the sign representation.
inline GroupRef z2_group() {
  static const GroupRef z2 = cyclic_group(2);
  return z2;
}

inline constexpr std::size_t kSignIrrep = 1;

/// The symmetric group on three letters, elements in lexicographic order of
/// their one-line notation. Irreps: trivial, sign, standard (dimension 2).
inline GroupRef symmetric_group_3() {
  static const GroupRef s3 = [] {
    std::vector<std::array<int, 3>> perms = {
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto index_of = [&](const std::array<int, 3>& p) {
      for (std::size_t i = 0; i < perms.size(); ++i)
        if (perms[i] == p) return i;
      return perms.size();
    };
    GroupSpec g;
    g.name = "S3";
    g.order = 6;
    g.identity_index = 0;
    g.multiplication_table.assign(6, std::vector<std::size_t>(6));
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) {
        std::array<int, 3> c{};
        for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
        g.multiplication_table[a][b] = index_of(c);
      }
    std::vector<std::vector<std::complex<double>>> chi(3, std::vector<std::complex<double>>(6));
    for (std::size_t x = 0; x < 6; ++x) {
      int fixed = 0;
      for (int i = 0; i < 3; ++i) fixed += perms[x][i] == i;
      const double sign = fixed == 1 ? -1.0 : 1.0;  // transpositions fix one point
      chi[0][x] = 1.0;
      chi[1][x] = sign;
      chi[2][x] = static_cast<double>(fixed) - 1.0;
    }
    g.character_table = std::move(chi);
    return GroupRef(std::move(g));
  }();
  return s3;
}

}  // namespace grover_lab
