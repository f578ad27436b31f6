// Randomized invariants over generated diagrams (wire dimensions up to 64).
#include <gtest/gtest.h>

#include <random>

#include "grover_lab/grover_lab.hpp"

using namespace grover_lab;

namespace {

constexpr std::size_t kMaxDim = 64;

const std::vector<SpaceLabel>& spaces() {
  static const std::vector<SpaceLabel> s = {SpaceLabel::set("A", 2), SpaceLabel::set("B", 3),
                                            SpaceLabel::set("C", 4)};
  return s;
}

DenseTensor random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseTensor t(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) t(r, c) = Complex(u(rng), u(rng));
  return t;
}

// One random layer consuming `wires`. New wires are only introduced while
// the running dimension stays within kMaxDim.
Slice random_slice(const std::vector<SpaceLabel>& wires, std::mt19937_64& rng, bool classical) {
  std::uniform_int_distribution<int> pick(0, classical ? 6 : 8);
  Slice slice;
  std::size_t dim = dimension_product(wires);
  for (std::size_t i = 0; i < wires.size();) {
    const SpaceLabel& w = wires[i];
    const int choice = pick(rng);
    const bool same_next = i + 1 < wires.size() && wires[i + 1] == w;
    if (choice == 0 && dim * w.dimension <= kMaxDim) {
      slice.push_back(gen::Comult{w});
      dim *= w.dimension;
    } else if (choice == 1 && same_next) {
      slice.push_back(gen::Mult{w});
      dim /= w.dimension;
      i += 2;
      continue;
    } else if (choice == 2) {
      const auto& t = spaces()[rng() % spaces().size()];
      std::vector<std::size_t> table(w.dimension);
      for (auto& v : table) v = rng() % t.dimension;
      if (dim / w.dimension * t.dimension <= kMaxDim) {
        slice.push_back(gen::FunctionBox{w, t, table});
        dim = dim / w.dimension * t.dimension;
      } else {
        slice.push_back(gen::Identity{w});
      }
    } else if (choice == 3 && wires.size() > 1) {
      slice.push_back(gen::Counit{w});
      dim /= w.dimension;
    } else if (choice == 4 && i + 1 < wires.size()) {
      slice.push_back(gen::Swap{w, wires[i + 1]});
      i += 2;
      continue;
    } else if (choice == 5) {
      const auto& t = spaces()[rng() % spaces().size()];
      slice.push_back(gen::Identity{w});
      if (dim * t.dimension <= kMaxDim) {
        slice.push_back(gen::Point{t, rng() % t.dimension});
        dim *= t.dimension;
      }
    } else if (choice == 7) {
      const auto& t = spaces()[rng() % spaces().size()];
      if (dim / w.dimension * t.dimension <= kMaxDim) {
        slice.push_back(gen::CustomBox{"R", {w}, {t}, random_matrix(t.dimension, w.dimension, rng)});
        dim = dim / w.dimension * t.dimension;
      } else {
        slice.push_back(gen::Identity{w});
      }
    } else if (choice == 8) {
      slice.push_back(gen::Unit{w});
      slice.push_back(gen::PointEffect{w, rng() % w.dimension});
    } else {
      slice.push_back(gen::Identity{w});
    }
    ++i;
  }
  return slice;
}

Diagram random_diagram(std::mt19937_64& rng, std::size_t depth, bool classical = false) {
  std::vector<SpaceLabel> in;
  const std::size_t n_in = 1 + rng() % 2;
  for (std::size_t i = 0; i < n_in; ++i) in.push_back(spaces()[rng() % spaces().size()]);
  std::vector<Slice> slices;
  std::vector<SpaceLabel> wires = in;
  for (std::size_t s = 0; s < depth; ++s) {
    slices.push_back(random_slice(wires, rng, classical));
    wires = slice_outputs(slices.back());
  }
  return Diagram::from_slices(in, wires, std::move(slices));
}

// A random diagram with prescribed boundary: a CustomBox sandwich.
Diagram random_map(const std::vector<SpaceLabel>& in, const std::vector<SpaceLabel>& out,
                   std::mt19937_64& rng) {
  const auto m = random_matrix(dimension_product(out), dimension_product(in), rng);
  return make_generator(gen::CustomBox{"M", in, out, m});
}

}  // namespace

TEST(Properties, GeneratedDiagramsValidate) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Diagram d = random_diagram(rng, 1 + rng() % 5);
    ASSERT_TRUE(validate(d).ok()) << validate(d).to_string();
    EXPECT_LE(dimension_product(d.outputs()), kMaxDim);
  }
}

TEST(Properties, DaggerIsConjugateTranspose) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const Diagram d = random_diagram(rng, 1 + rng() % 5);
    EXPECT_LE(max_abs_diff(eval(dagger(d)), adjoint(eval(d))), 1e-12);
    EXPECT_LE(max_abs_diff(eval(dagger(dagger(d))), eval(d)), 1e-12);
  }
}

TEST(Properties, ComposeIsMatrixProduct) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Diagram a = random_diagram(rng, 1 + rng() % 3);
    const Diagram b = random_map(a.outputs(), {spaces()[rng() % 3]}, rng);
    const DenseTensor expected = matmul(eval(b), eval(a));
    EXPECT_LE(max_abs_diff(eval(compose(a, b)), expected), 1e-12);
  }
}

TEST(Properties, TensorIsKronecker) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Diagram a = random_diagram(rng, 1 + rng() % 3);
    const Diagram b = random_diagram(rng, 1 + rng() % 3);
    if (dimension_product(a.outputs()) * dimension_product(b.outputs()) > 4096) continue;
    EXPECT_LE(max_abs_diff(eval(tensor(a, b)), kron(eval(a), eval(b))), 1e-12);
  }
}

TEST(Properties, Interchange) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Diagram a = random_diagram(rng, 1 + rng() % 3);
    const Diagram b = random_diagram(rng, 1 + rng() % 3);
    const Diagram c = random_map(a.outputs(), {spaces()[rng() % 3]}, rng);
    const Diagram d = random_map(b.outputs(), {spaces()[rng() % 3]}, rng);
    if (dimension_product(a.outputs()) * dimension_product(b.outputs()) > 4096) continue;
    const DenseTensor lhs = eval(compose(tensor(a, b), tensor(c, d)));
    const DenseTensor rhs = eval(tensor(compose(a, c), compose(b, d)));
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
  }
}

TEST(Properties, ComposeIsAssociative) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const Diagram a = random_diagram(rng, 1 + rng() % 3);
    const Diagram b = random_map(a.outputs(), {spaces()[rng() % 3]}, rng);
    const Diagram c = random_map(b.outputs(), {spaces()[rng() % 3], spaces()[rng() % 3]}, rng);
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
  }
}

TEST(Properties, SerializationRoundTrips) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Diagram d = random_diagram(rng, 1 + rng() % 5);
    const std::string text = print_diagram(d);
    const Diagram back = parse_diagram(text);
    EXPECT_EQ(back, d);
    EXPECT_EQ(print_diagram(back), text);
  }
}

TEST(Properties, NormalizePreservesSemanticsAndTerminates) {
  std::mt19937_64 rng(8);
  std::size_t rewrites = 0;
  for (int i = 0; i < 300; ++i) {
    const Diagram d = random_diagram(rng, 2 + rng() % 5, /*classical=*/true);
    const auto result = normalize(d, 10000);
    EXPECT_FALSE(result.budget_exhausted);
    EXPECT_TRUE(validate(result.diagram).ok());
    EXPECT_EQ(result.diagram.inputs(), d.inputs());
    EXPECT_EQ(result.diagram.outputs(), d.outputs());
    EXPECT_LE(max_abs_diff(eval(result.diagram), eval(d)), 1e-10);
    EXPECT_EQ(replay(result.trace), result.diagram);
    EXPECT_FALSE(find_first_match(result.diagram, rules_catalog()).has_value());
    // Each step lowers the termination measure.
    Diagram current = d;
    for (const auto& step : result.trace.steps) {
      const Diagram next = apply_rule(find_rule(step.rule), current, {step.slice, step.offset});
      EXPECT_LT(rewrite_measure(next), rewrite_measure(current)) << step.rule;
      current = next;
    }
    rewrites += result.trace.steps.size();
  }
  EXPECT_GT(rewrites, 100u);  // the generator actually exercises the rules
}

TEST(Properties, EveryMatchedRewriteIsSound) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Diagram d = random_diagram(rng, 2 + rng() % 4, true);
    for (const auto& rule : rules_catalog())
      for (std::size_t s = 0; s + 1 < d.slices().size(); ++s)
        for (std::size_t p = 0; p < d.slices()[s].size(); ++p) {
          const RuleMatch m = try_rule(rule, d, {s, p});
          if (m.status != MatchStatus::matched) continue;
          ASSERT_TRUE(validate(m.rhs).ok()) << rule.name;
          EXPECT_LE(max_abs_diff(eval(m.rhs), eval(d)), 1e-10) << rule.name;
        }
  }
}

TEST(Properties, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const unsigned n = 1 + rng() % 10;
    const std::uint64_t N = std::uint64_t{1} << n;
    std::vector<std::uint64_t> marked(1 + rng() % std::min<std::uint64_t>(N, 4));
    for (auto& m : marked) m = rng() % N;
    const auto t = grover_run(OracleFunction(n, marked), rng() % 20,
                              rng() % 2 ? OracleMode::phase : OracleMode::ancilla);
    double sum = 0.0;
    for (double p : t.probabilities) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}
