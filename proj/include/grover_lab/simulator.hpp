#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "grover_lab/error.hpp"

namespace grover_lab {

inline constexpr unsigned kDefaultMaxQubits = 24;

/// Indicator f : {0,1}^n -> Z_2 of a non-empty set of marked elements.
class OracleFunction {
 public:
  OracleFunction(unsigned n, std::vector<std::uint64_t> marked) : n_(n), marked_(std::move(marked)) {
    if (n < 1 || n >= 63) throw Error(ErrorCode::invalid_argument, "qubit count out of range");
    if (marked_.empty()) throw Error(ErrorCode::invalid_argument, "no marked element");
    std::sort(marked_.begin(), marked_.end());
    marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
    if (marked_.back() >= (std::uint64_t{1} << n))
      throw Error(ErrorCode::invalid_argument,
                  "marked element " + std::to_string(marked_.back()) + " outside 2^" +
                      std::to_string(n));
  }

  unsigned n() const noexcept { return n_; }
  const std::vector<std::uint64_t>& marked() const noexcept { return marked_; }

  bool operator()(std::uint64_t x) const {
    return std::binary_search(marked_.begin(), marked_.end(), x);
  }

 private:
  unsigned n_;
  std::vector<std::uint64_t> marked_;
};

struct StateVector {
  unsigned n = 0;
  std::vector<std::complex<double>> amplitudes;

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
  }
};

enum class OracleMode { phase, ancilla };

inline void check_qubits(unsigned n, unsigned max_qubits) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "at least one qubit is required");
  if (n > max_qubits)
    throw Error(ErrorCode::cap_exceeded, std::to_string(n) + " qubits exceed the cap of " +
                                             std::to_string(max_qubits));
}

/// H^n |0...0>.
inline StateVector uniform_state(unsigned n, unsigned max_qubits = kDefaultMaxQubits) {
  check_qubits(n, max_qubits);
  const std::size_t dim = std::size_t{1} << n;
  return {n, std::vector<std::complex<double>>(dim, 1.0 / std::sqrt(static_cast<double>(dim)))};
}

namespace detail {

inline void check_oracle_dims(const StateVector& s, const OracleFunction& f) {
  if (s.n != f.n() || s.amplitudes.size() != (std::size_t{1} << s.n))
    throw Error(ErrorCode::dimension_mismatch,
                "state on " + std::to_string(s.n) + " qubits, oracle on " + std::to_string(f.n()));
}

inline void phase_flip_in_place(std::vector<std::complex<double>>& a, const OracleFunction& f) {
  for (auto x : f.marked()) a[x] = -a[x];
}

inline void diffuse_in_place(std::vector<std::complex<double>>& a) {
  std::complex<double> sum{};
  for (const auto& v : a) sum += v;
  const std::complex<double> twice_mean = 2.0 * sum / static_cast<double>(a.size());
  for (auto& v : a) v = twice_mean - v;
}

}  // namespace detail

/// Applies U_f. Phase mode multiplies amplitude x by (-1)^f(x). Ancilla mode
/// appends a qubit in |->, applies |x>|y> -> |x>|y xor f(x)>, then projects
/// the ancilla back out.
inline StateVector apply_oracle(const StateVector& s, const OracleFunction& f,
                                OracleMode mode = OracleMode::phase) {
  detail::check_oracle_dims(s, f);
  StateVector out = s;
  if (mode == OracleMode::phase) {
    detail::phase_flip_in_place(out.amplitudes, f);
    return out;
  }
  const std::size_t dim = s.amplitudes.size();
  const double r = 1.0 / std::numbers::sqrt2;
  // Register index x is the high part, the ancilla bit y the low bit.
  std::vector<std::complex<double>> extended(2 * dim);
  for (std::size_t x = 0; x < dim; ++x) {
    extended[2 * x] = s.amplitudes[x] * r;
    extended[2 * x + 1] = -s.amplitudes[x] * r;
  }
  for (std::size_t x = 0; x < dim; ++x)
    if (f(x)) std::swap(extended[2 * x], extended[2 * x + 1]);
  for (std::size_t x = 0; x < dim; ++x)
    out.amplitudes[x] = (extended[2 * x] - extended[2 * x + 1]) * r;
  return out;
}

/// Inversion about the mean, -I + 2A with A_ij = 1/2^n.
inline StateVector apply_diffusion(const StateVector& s) {
  StateVector out = s;
  detail::diffuse_in_place(out.amplitudes);
  return out;
}

struct ProbabilityTable {
  unsigned n = 0;
  std::size_t iterations = 0;
  std::vector<double> probabilities;
  double marked_probability = 0.0;
  double max_unmarked_probability = 0.0;
};

inline ProbabilityTable probability_table(const StateVector& s, const OracleFunction& f,
                                          std::size_t iterations) {
  ProbabilityTable t;
  t.n = s.n;
  t.iterations = iterations;
  t.probabilities.reserve(s.amplitudes.size());
  for (std::size_t x = 0; x < s.amplitudes.size(); ++x) {
    const double p = std::norm(s.amplitudes[x]);
    t.probabilities.push_back(p);
    if (f(x))
      t.marked_probability += p;
    else
      t.max_unmarked_probability = std::max(t.max_unmarked_probability, p);
  }
  return t;
}

/// Final state after k Grover iterations from the uniform state.
inline StateVector grover_state(const OracleFunction& f, std::size_t k,
                                OracleMode mode = OracleMode::phase,
                                unsigned max_qubits = kDefaultMaxQubits) {
  StateVector s = uniform_state(f.n(), max_qubits);
  for (std::size_t i = 0; i < k; ++i) {
    if (mode == OracleMode::phase)
      detail::phase_flip_in_place(s.amplitudes, f);
    else
      s = apply_oracle(s, f, mode);
    detail::diffuse_in_place(s.amplitudes);
  }
  return s;
}

inline ProbabilityTable grover_run(const OracleFunction& f, std::size_t k,
                                   OracleMode mode = OracleMode::phase,
                                   unsigned max_qubits = kDefaultMaxQubits) {
  return probability_table(grover_state(f, k, mode, max_qubits), f, k);
}

/// sin^2((2k+1) theta), sin theta = 2^(-n/2): the marked probability after k
/// iterations with a single marked element.
inline double closed_form_marked_prob(unsigned n, std::size_t k) {
  const double theta = std::asin(std::pow(2.0, -0.5 * static_cast<double>(n)));
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
  return s * s;
}

struct IterationCounts {
  std::size_t paper_mode = 1;    ///< round(sqrt(2^n))
  std::size_t optimal_mode = 1;  ///< floor(pi/4 sqrt(2^n))
};

inline IterationCounts optimal_iterations(unsigned n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "n must be at least 1");
  const double root = std::sqrt(std::ldexp(1.0, static_cast<int>(n)));
  IterationCounts c;
  c.paper_mode = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(root)));
  c.optimal_mode =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::numbers::pi / 4 * root)));
  return c;
}

}  // namespace grover_lab
