#include <gtest/gtest.h>

#include <random>

#include "grover_lab/grover_lab.hpp"
#include "oracles.hpp"

using namespace grover_lab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::invalid_argument;
}

StateVector random_state(unsigned n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector s{n, std::vector<std::complex<double>>(std::size_t{1} << n)};
  double norm = 0.0;
  for (auto& a : s.amplitudes) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (auto& a : s.amplitudes) a /= std::sqrt(norm);
  return s;
}

}  // namespace

TEST(UniformState, OneQubit) {
  const auto s = uniform_state(1);
  EXPECT_NEAR(s.amplitudes[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amplitudes[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(UniformState, TwoQubitsAreOneHalf) {
  for (const auto& a : uniform_state(2).amplitudes) EXPECT_EQ(a, std::complex<double>(0.5));
}

TEST(UniformState, CapExceeded) {
  EXPECT_EQ(code_of([] { uniform_state(25); }), ErrorCode::cap_exceeded);
  EXPECT_EQ(code_of([] { uniform_state(5, 4); }), ErrorCode::cap_exceeded);
  EXPECT_EQ(code_of([] { uniform_state(0); }), ErrorCode::invalid_argument);
}

TEST(OracleFunction, Validation) {
  EXPECT_EQ(code_of([] { OracleFunction(2, {}); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { OracleFunction(2, {4}); }), ErrorCode::invalid_argument);
  const OracleFunction f(3, {5, 1, 5});
  EXPECT_EQ(f.marked(), (std::vector<std::uint64_t>{1, 5}));
  EXPECT_TRUE(f(5));
  EXPECT_FALSE(f(0));
}

TEST(ApplyOracle, PhaseFlipOnUniform) {
  const auto s = apply_oracle(uniform_state(2), OracleFunction(2, {3}));
  const std::vector<std::complex<double>> expected = {0.5, 0.5, 0.5, -0.5};
  EXPECT_EQ(s.amplitudes, expected);
}

TEST(ApplyOracle, NoEffectWhenMarkedAmplitudeIsZero) {
  StateVector s{2, {0.6, 0.8, 0.0, 0.0}};
  EXPECT_EQ(apply_oracle(s, OracleFunction(2, {3})).amplitudes, s.amplitudes);
  // The ancilla path multiplies by 1/sqrt(2) twice, so only up to rounding.
  const auto a = apply_oracle(s, OracleFunction(2, {3}), OracleMode::ancilla);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(a.amplitudes[i] - s.amplitudes[i]), 0.0, 1e-15);
}

TEST(ApplyOracle, DimensionMismatch) {
  EXPECT_EQ(code_of([] { apply_oracle(uniform_state(2), OracleFunction(3, {0})); }),
            ErrorCode::dimension_mismatch);
}

TEST(ApplyOracle, AncillaModeMatchesExplicitBitflipMatrix) {
  std::mt19937_64 rng(7);
  for (unsigned n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::uint64_t m = rng() % (1u << n);
      const OracleFunction f(n, {m});
      const StateVector s = random_state(n, rng);
      // Oracle: |s>|-> through the 2^(n+1) bit-flip matrix, then <-| on the ancilla.
      const std::size_t N = std::size_t{1} << n;
      oracle::Matrix v(2 * N, 1);
      const double r = 1.0 / std::sqrt(2.0);
      for (std::size_t x = 0; x < N; ++x) {
        v.at(2 * x, 0) = s.amplitudes[x] * r;
        v.at(2 * x + 1, 0) = -s.amplitudes[x] * r;
      }
      const auto w = oracle::multiply(oracle::bitflip_oracle_matrix(n, {m}), v);
      const auto ancilla = apply_oracle(s, f, OracleMode::ancilla);
      const auto phase = apply_oracle(s, f, OracleMode::phase);
      for (std::size_t x = 0; x < N; ++x) {
        const auto projected = (w.at(2 * x, 0) - w.at(2 * x + 1, 0)) * r;
        EXPECT_NEAR(std::abs(ancilla.amplitudes[x] - projected), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(ancilla.amplitudes[x] - phase.amplitudes[x]), 0.0, 1e-12);
      }
    }
  }
}

TEST(ApplyDiffusion, UniformIsFixed) {
  for (unsigned n = 1; n <= 6; ++n) {
    const auto s = uniform_state(n);
    const auto d = apply_diffusion(s);
    for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
      EXPECT_NEAR(std::abs(d.amplitudes[i] - s.amplitudes[i]), 0.0, 1e-15);
  }
}

TEST(ApplyDiffusion, TwoQubitExample) {
  const auto d = apply_diffusion(StateVector{2, {0.5, 0.5, 0.5, -0.5}});
  const std::vector<std::complex<double>> expected = {0.0, 0.0, 0.0, 1.0};
  EXPECT_EQ(d.amplitudes, expected);
}

TEST(ApplyDiffusion, BasisStateOneQubit) {
  const auto d = apply_diffusion(StateVector{1, {1.0, 0.0}});
  EXPECT_NEAR(std::abs(d.amplitudes[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.amplitudes[1] - 1.0), 0.0, 1e-15);
}

TEST(ApplyDiffusion, MatchesDenseMatrix) {
  std::mt19937_64 rng(11);
  for (unsigned n = 1; n <= 5; ++n) {
    const StateVector s = random_state(n, rng);
    const std::size_t N = s.amplitudes.size();
    oracle::Matrix v(N, 1);
    for (std::size_t i = 0; i < N; ++i) v.at(i, 0) = s.amplitudes[i];
    const auto w = oracle::multiply(oracle::diffusion_matrix(N), v);
    const auto d = apply_diffusion(s);
    for (std::size_t i = 0; i < N; ++i) EXPECT_NEAR(std::abs(d.amplitudes[i] - w.at(i, 0)), 0.0, 1e-12);
  }
}

TEST(GroverRun, TwoQubitsOneStep) {
  const auto t = grover_run(OracleFunction(2, {3}), 1);
  EXPECT_NEAR(t.probabilities[3], 1.0, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(t.probabilities[i], 0.0, 1e-15);
  EXPECT_NEAR(t.marked_probability, 1.0, 1e-15);
  EXPECT_EQ(t.iterations, 1u);
}

TEST(GroverRun, ZeroIterationsIsUniform) {
  const auto t = grover_run(OracleFunction(2, {3}), 0);
  for (double p : t.probabilities) EXPECT_NEAR(p, 0.25, 1e-15);
}

TEST(GroverRun, FourQubitsThreeSteps) {
  const auto t = grover_run(OracleFunction(4, {5}), 3);
  EXPECT_NEAR(t.probabilities[5], std::pow(std::sin(7.0 * std::asin(0.25)), 2), 1e-10);
}

TEST(GroverRun, MultipleMarkedMatchesDenseMatrix) {
  const std::vector<std::uint64_t> marked = {1, 6, 7};
  for (std::size_t k = 0; k <= 4; ++k) {
    const auto t = grover_run(OracleFunction(3, marked), k);
    const auto q = oracle::grover_probabilities(3, marked, k);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(t.probabilities[i], q[i], 1e-12);
    EXPECT_NEAR(t.marked_probability, q[1] + q[6] + q[7], 1e-12);
  }
}

TEST(GroverRun, ModesAgree) {
  for (unsigned n = 1; n <= 6; ++n) {
    const OracleFunction f(n, {(std::uint64_t{1} << n) - 1});
    for (std::size_t k = 0; k <= 5; ++k) {
      const auto a = grover_run(f, k, OracleMode::phase);
      const auto b = grover_run(f, k, OracleMode::ancilla);
      for (std::size_t i = 0; i < a.probabilities.size(); ++i)
        EXPECT_NEAR(a.probabilities[i], b.probabilities[i], 1e-12);
    }
  }
}

TEST(GroverRun, NormIsPreserved) {
  for (unsigned n = 1; n <= 10; ++n) {
    const auto s = grover_state(OracleFunction(n, {0}), 17);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
  }
}

TEST(ClosedForm, Examples) {
  EXPECT_NEAR(closed_form_marked_prob(2, 1), 1.0, 1e-15);
  for (unsigned n = 1; n <= 20; ++n) EXPECT_NEAR(closed_form_marked_prob(n, 0), std::ldexp(1.0, -static_cast<int>(n)), 1e-15);
  EXPECT_GT(closed_form_marked_prob(4, optimal_iterations(4).optimal_mode), 0.9);
  EXPECT_NEAR(closed_form_marked_prob(4, 3), 0.9613189697265625, 1e-15);
}

TEST(OptimalIterations, Examples) {
  EXPECT_EQ(optimal_iterations(4).paper_mode, 4u);
  EXPECT_EQ(optimal_iterations(4).optimal_mode, 3u);
  EXPECT_EQ(optimal_iterations(2).paper_mode, 2u);
  EXPECT_EQ(optimal_iterations(2).optimal_mode, 1u);
  EXPECT_EQ(optimal_iterations(6).paper_mode, 8u);
  EXPECT_EQ(optimal_iterations(6).optimal_mode, 6u);
  EXPECT_EQ(optimal_iterations(1).optimal_mode, 1u);  // floor(pi/4 sqrt 2) = 1
  EXPECT_EQ(optimal_iterations(3).paper_mode, 3u);    // round(2.83)
  EXPECT_EQ(optimal_iterations(5).paper_mode, 6u);    // round(5.66)
}

TEST(PaperModeMarkedProbability, FrozenValues) {
  // Exact values of sin^2((2k+1) asin 2^{-n/2}) at k = round(sqrt(2^n)),
  // recomputed at 30 digits.
  const std::vector<std::pair<unsigned, double>> golden = {
      {2, 0.25}, {3, 0.330078125}, {4, 0.58170413970947266}, {5, 0.54589199902738983}};
  for (const auto& [n, p] : golden) {
    const auto t = grover_run(OracleFunction(n, {0}), optimal_iterations(n).paper_mode);
    EXPECT_NEAR(t.marked_probability, p, 1e-12) << "n=" << n;
  }
}
