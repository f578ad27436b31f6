#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grover_lab/error.hpp"
#include "grover_lab/eval.hpp"
#include "grover_lab/grover_diagram.hpp"
#include "grover_lab/simulator.hpp"

namespace grover_lab {

/// |S| - 2 |marked|: the sum of the sign character over the oracle's values.
inline std::int64_t sigma_sum(std::int64_t set_size, std::int64_t marked_count) {
  if (marked_count < 1 || marked_count >= set_size)
    throw Error(ErrorCode::invalid_counts,
                "need 1 <= marked_count < N, got marked_count=" + std::to_string(marked_count) +
                    ", N=" + std::to_string(set_size));
  return (set_size - marked_count) - marked_count;
}

/// The same sum read off the closed sigma-sum diagram over a set of size N
/// whose first marked_count elements are marked.
inline Complex sigma_sum_from_diagram(std::size_t set_size, std::size_t marked_count) {
  if (marked_count < 1 || marked_count >= set_size)
    throw Error(ErrorCode::invalid_counts, "need 1 <= marked_count < N");
  std::vector<std::uint64_t> marked(marked_count);
  std::iota(marked.begin(), marked.end(), std::uint64_t{0});
  return scalar_of(sigma_sum_diagram(indicator_function(SpaceLabel::set("S", set_size), marked)));
}

/// Sign and natural log of the magnitude of a real number; sign 0 means the
/// value is exactly zero.
struct SignedLog {
  int sign = 0;
  long double log_abs = -std::numeric_limits<long double>::infinity();

  double value() const {
    return sign == 0 ? 0.0 : static_cast<double>(sign * std::exp(log_abs));
  }
};

struct PaperAmplitude {
  double N = 0.0;
  double k = 0.0;
  double two_summand_value = 0.0;
  double simplified_value = 0.0;
  SignedLog two_summand_log;
  SignedLog simplified_log;

  /// |two_summand - simplified| / max(|two_summand|, |simplified|); 0 when
  /// both vanish.
  double relative_difference() const {
    const double scale = std::max(std::abs(two_summand_value), std::abs(simplified_value));
    if (scale == 0.0) return 0.0;
    return std::abs(two_summand_value - simplified_value) / scale;
  }
};

/// The unmarked-element amplitude
///   A = (1/N)^k [ (1-2/N)^(k-1) (N-2)^(k-1) - (2/N)(1-2/N)^(k-1) (N-2)^k ]
/// and its factored form
///   A = (1/N)^k (1-2/N)^(k-1) (N-2)^(k-1) (-1 + 4/N),
/// both evaluated as sums of logarithms in extended precision so that
/// (1/N)^k cannot underflow. k may be any real number.
inline PaperAmplitude paper_amplitude(double set_size, double k) {
  if (!(set_size > 2.0) || !std::isfinite(set_size) || !std::isfinite(k))
    throw Error(ErrorCode::domain_error,
                "amplitude formula needs finite N > 2, got N=" + std::to_string(set_size));
  using LD = long double;
  const LD n = set_size;
  const LD kk = k;
  const LD log_inv_n_k = -kk * std::log(n);
  const LD log_shrink = std::log(1.0L - 2.0L / n);  // log(1 - 2/N)
  const LD log_gap = std::log(n - 2.0L);           // log(N - 2)

  PaperAmplitude a;
  a.N = set_size;
  a.k = k;

  // Two-summand form: each summand is positive; their difference is
  // T1 (1 - T2/T1) with T2/T1 = (2/N)(N-2).
  const LD log_t1 = (kk - 1.0L) * log_shrink + (kk - 1.0L) * log_gap;
  const LD one_minus_ratio = 1.0L - (2.0L / n) * (n - 2.0L);
  if (one_minus_ratio != 0.0L) {
    a.two_summand_log.sign = one_minus_ratio > 0 ? 1 : -1;
    a.two_summand_log.log_abs = log_inv_n_k + log_t1 + std::log(std::abs(one_minus_ratio));
  }

  const LD last = -1.0L + 4.0L / n;
  if (last != 0.0L) {
    a.simplified_log.sign = last > 0 ? 1 : -1;
    a.simplified_log.log_abs = log_inv_n_k + (kk - 1.0L) * log_shrink + (kk - 1.0L) * log_gap +
                               std::log(std::abs(last));
  }
  a.two_summand_value = a.two_summand_log.value();
  a.simplified_value = a.simplified_log.value();
  return a;
}

/// The exponent used for the formula: sqrt(N), not rounded.
inline double paper_exponent(double set_size) { return std::sqrt(set_size); }

enum class Verdict { pass, fail, not_applicable };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "n/a";
  }
  return "n/a";
}

struct ClaimRecord {
  unsigned n = 0;
  double N = 0.0;
  double k = 0.0;
  double A = 0.0;
  double A_squared = 0.0;
  double total_unmarked = 0.0;
  bool a_squared_below_half = false;
  bool total_unmarked_below_half = false;
  std::optional<std::size_t> simulator_iterations;
  std::optional<double> simulator_marked;
  std::optional<double> simulator_unmarked_each;
  std::optional<double> discrepancy_ratio;
};

struct ClaimsReport {
  std::vector<ClaimRecord> records;
  Verdict a_squared_below_half = Verdict::not_applicable;
  Verdict total_unmarked_below_half = Verdict::not_applicable;
  /// total_unmarked at n_max below its value at max(n_min, 6).
  Verdict trend_to_zero = Verdict::not_applicable;
  /// total_unmarked(n + 2) < total_unmarked(n) for every n >= 6 in range.
  Verdict monotone_vanishing = Verdict::not_applicable;
  /// Simulated marked probability >= 1/2 at round(sqrt(2^n)) iterations.
  Verdict marked_at_least_half = Verdict::not_applicable;
};

/// simulator / formula, +inf when only the formula vanishes, NaN when both do.
inline double discrepancy_ratio(double simulator, double formula) {
  if (formula == 0.0)
    return simulator == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                            : std::numeric_limits<double>::infinity();
  return simulator / formula;
}

inline ClaimsReport paper_claims_check(unsigned n_min, unsigned n_max, unsigned simulate_up_to = 16,
                                       unsigned max_qubits = kDefaultMaxQubits) {
  if (n_min < 2 || n_min > n_max || n_max > 64)
    throw Error(ErrorCode::invalid_argument, "need 2 <= n_min <= n_max <= 64");
  ClaimsReport report;
  for (unsigned n = n_min; n <= n_max; ++n) {
    ClaimRecord r;
    r.n = n;
    r.N = std::ldexp(1.0, static_cast<int>(n));
    r.k = paper_exponent(r.N);
    r.A = paper_amplitude(r.N, r.k).simplified_value;
    r.A_squared = r.A * r.A;
    r.total_unmarked = (r.N - 1.0) * r.A_squared;
    r.a_squared_below_half = r.A_squared < 0.5;
    r.total_unmarked_below_half = r.total_unmarked < 0.5;
    if (n <= simulate_up_to && n <= max_qubits) {
      const std::size_t k = optimal_iterations(n).paper_mode;
      const auto table = grover_run(OracleFunction(n, {0}), k, OracleMode::phase, max_qubits);
      r.simulator_iterations = k;
      r.simulator_marked = table.marked_probability;
      r.simulator_unmarked_each = (1.0 - table.marked_probability) / (r.N - 1.0);
      r.discrepancy_ratio = discrepancy_ratio(*r.simulator_unmarked_each, r.A_squared);
    }
    report.records.push_back(r);
  }

  auto all = [&](auto pred) {
    for (const auto& r : report.records)
      if (!pred(r)) return Verdict::fail;
    return Verdict::pass;
  };
  report.a_squared_below_half = all([](const ClaimRecord& r) { return r.a_squared_below_half; });
  report.total_unmarked_below_half =
      all([](const ClaimRecord& r) { return r.total_unmarked_below_half; });

  auto value_at = [&](unsigned n) { return report.records[n - n_min].total_unmarked; };
  const unsigned base = std::max(n_min, 6u);
  if (n_max > base) report.trend_to_zero = value_at(n_max) < value_at(base) ? Verdict::pass : Verdict::fail;
  for (unsigned n = base; n + 2 <= n_max; ++n) {
    if (report.monotone_vanishing == Verdict::not_applicable)
      report.monotone_vanishing = Verdict::pass;
    if (!(value_at(n + 2) < value_at(n))) report.monotone_vanishing = Verdict::fail;
  }
  for (const auto& r : report.records) {
    if (!r.simulator_marked) continue;
    if (report.marked_at_least_half == Verdict::not_applicable)
      report.marked_at_least_half = Verdict::pass;
    if (!(*r.simulator_marked >= 0.5)) report.marked_at_least_half = Verdict::fail;
  }
  return report;
}

enum class IterationMode { paper, optimal };

inline std::string_view iteration_mode_name(IterationMode m) {
  return m == IterationMode::paper ? "paper" : "optimal";
}

inline constexpr unsigned kMaxDiagramQubits = 5;

struct ComparisonReport {
  unsigned n = 0;
  double N = 0.0;
  IterationMode mode = IterationMode::paper;
  std::size_t k = 0;
  std::uint64_t marked = 0;
  double simulator_marked = 0.0;
  double simulator_unmarked_each = 0.0;
  bool diagram_evaluated = false;
  std::optional<double> diagram_marked;
  std::optional<double> diagram_unmarked_each;
  /// Largest |p_simulator(x) - p_diagram(x)| over all x.
  std::optional<double> diagram_max_deviation;
  double formula_k = 0.0;
  double formula_A = 0.0;
  double formula_A_squared = 0.0;
  double discrepancy_ratio = 0.0;
};

/// Runs the simulator, the Grover diagram (n <= 5) and the closed-form
/// amplitude side by side. Agreement between the formula and the other two
/// is measured, not assumed.
inline ComparisonReport compare(unsigned n, IterationMode mode, std::uint64_t marked = 0,
                                unsigned max_qubits = kDefaultMaxQubits) {
  check_qubits(n, max_qubits);
  ComparisonReport c;
  c.n = n;
  c.N = std::ldexp(1.0, static_cast<int>(n));
  c.mode = mode;
  c.marked = marked;
  const auto counts = optimal_iterations(n);
  c.k = mode == IterationMode::paper ? counts.paper_mode : counts.optimal_mode;

  const OracleFunction f(n, {marked});
  const auto table = grover_run(f, c.k, OracleMode::phase, max_qubits);
  c.simulator_marked = table.marked_probability;
  double unmarked_sum = 0.0;
  for (std::size_t x = 0; x < table.probabilities.size(); ++x)
    if (x != marked) unmarked_sum += table.probabilities[x];
  c.simulator_unmarked_each = unmarked_sum / (c.N - 1.0);

  if (n <= kMaxDiagramQubits) {
    const std::uint64_t marks[] = {marked};
    const DenseTensor state = eval(build_grover_diagram(n, indicator_function(n, marks), c.k));
    double deviation = 0.0, diagram_unmarked = 0.0;
    for (std::size_t x = 0; x < state.rows(); ++x) {
      const double p = std::norm(state(x, 0));
      deviation = std::max(deviation, std::abs(p - table.probabilities[x]));
      if (x == marked)
        c.diagram_marked = p;
      else
        diagram_unmarked += p;
    }
    c.diagram_evaluated = true;
    c.diagram_unmarked_each = diagram_unmarked / (c.N - 1.0);
    c.diagram_max_deviation = deviation;
  }

  c.formula_k = paper_exponent(c.N);
  c.formula_A = paper_amplitude(c.N, c.formula_k).simplified_value;
  c.formula_A_squared = c.formula_A * c.formula_A;
  c.discrepancy_ratio = discrepancy_ratio(c.simulator_unmarked_each, c.formula_A_squared);
  return c;
}

}  // namespace grover_lab
