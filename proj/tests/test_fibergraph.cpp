#include "oracles.hpp"
#include "toric/fibergraph.hpp"
#include "toric/io.hpp"
#include "toric/markov.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace toric;

namespace {

std::vector<std::vector<IntVector>> component_elements(const FiberGraph& g) {
  std::vector<std::vector<IntVector>> out;
  for (const auto& c : g.components) {
    std::vector<IntVector> els;
    for (auto i : c) els.push_back(g.fiber.elements[i]);
    std::sort(els.begin(), els.end());
    out.push_back(els);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Fiber, OneTwoThreeDegreeSix) {
  auto A = admit_matrix({{1, 2, 3}});
  auto g = fiber_graph(A, {6});
  EXPECT_EQ(g.size(), 7u);
  EXPECT_EQ(g.component_count(), 1u);
  EXPECT_EQ(g.degree, 6);
}

TEST(Fiber, OneTwoThreeGeneratingFibers) {
  auto A = admit_matrix({{1, 2, 3}});
  auto g2 = fiber_graph(A, {2});
  EXPECT_EQ(component_elements(g2),
            (std::vector<std::vector<IntVector>>{{{0, 1, 0}}, {{2, 0, 0}}}));
  auto g3 = fiber_graph(A, {3});
  EXPECT_EQ(component_elements(g3),
            (std::vector<std::vector<IntVector>>{{{0, 0, 1}}, {{1, 1, 0}, {3, 0, 0}}}));
  auto fibers = generating_fibers(A);
  ASSERT_EQ(fibers.size(), 2u);
  EXPECT_EQ(fibers[0].fiber.key, (IntVector{2}));
  EXPECT_EQ(fibers[1].fiber.key, (IntVector{3}));
}

TEST(Fiber, ZeroDegreeAndEmptyFibers) {
  auto A = admit_matrix({{1, 2, 3}});
  auto g0 = fiber_graph(A, {0});
  ASSERT_EQ(g0.size(), 1u);
  EXPECT_EQ(g0.fiber.elements[0], (IntVector{0, 0, 0}));
  EXPECT_EQ(g0.component_count(), 1u);

  auto B = admit_matrix({{2}});
  EXPECT_EQ(fiber_graph(B, {1}).size(), 0u);
  EXPECT_EQ(fiber_graph(B, {4}).size(), 1u);
  // keys outside the semigroup's real cone
  auto C = admit_matrix({{1, 1}, {0, 1}});
  EXPECT_EQ(fiber_graph(C, {1, 2}).size(), 0u);
}

TEST(Fiber, CompleteAgainstBoxScan) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 3;
    oracle::Vec a(n);
    for (auto& x : a) x = 1 + static_cast<std::int64_t>(rng() % 9);
    auto A = admit_matrix({a});
    for (std::int64_t t = 0; t <= 60; t += 1 + static_cast<std::int64_t>(rng() % 7)) {
      auto expected = oracle::fiber_by_box(a, t);
      auto got = enumerate_fiber(A, {t}).elements;
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, expected) << "a = " << to_string(a) << " t = " << t;
    }
  }
}

TEST(Fiber, TwoRowCompleteAgainstBoxScan) {
  RawMatrix raw{{1, 1, 1, 1}, {0, 1, 2, 3}};
  auto A = admit_matrix(raw);
  for (std::int64_t d = 0; d <= 5; ++d)
    for (std::int64_t s = 0; s <= 3 * d; ++s) {
      std::vector<IntVector> expected;
      oracle::for_each_in_box(4, 0, d, [&](const oracle::Vec& u) {
        if (oracle::mul(raw, u) == oracle::Vec{d, s}) expected.push_back(u);
      });
      std::sort(expected.begin(), expected.end());
      auto got = enumerate_fiber(A, {d, s}).elements;
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, expected);
    }
}

TEST(FiberGraph, CliqueContractionMatchesBfs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 3 + rng() % 3;
    oracle::Vec a(n);
    for (auto& x : a) x = 1 + static_cast<std::int64_t>(rng() % 12);
    auto A = admit_matrix({a});
    std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 40);
    auto g = fiber_graph(A, {t});
    auto expected = oracle::components_by_bfs(g.fiber.elements);
    auto got = g.components;
    for (auto& c : got) std::sort(c.begin(), c.end());
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(got, expected);
  }
}

TEST(FiberGraph, ComponentsPartitionTheFiber) {
  auto A = admit_matrix({{3, 5, 7, 11}});
  for (std::int64_t t : {15, 22, 33, 40}) {
    auto g = fiber_graph(A, {t});
    std::vector<int> hits(g.size(), 0);
    for (const auto& c : g.components) {
      EXPECT_FALSE(c.empty());
      for (auto i : c) ++hits[i];
    }
    for (auto h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(FiberGraph, ExplicitEdgesShareSupport) {
  auto A = admit_matrix({{1, 2, 3}});
  auto g = fiber_graph(A, {4});
  for (auto [a, b] : explicit_edges(g)) {
    bool share = false;
    for (std::size_t i = 0; i < 3; ++i)
      share = share || (g.fiber.elements[a][i] > 0 && g.fiber.elements[b][i] > 0);
    EXPECT_TRUE(share);
  }
}

TEST(FiberGraph, CacheIsTransparent) {
  auto A = admit_matrix({{3, 5, 7}});
  FiberOptions no_cache;
  no_cache.use_cache = false;
  auto cold = fiber_graph(A, {21}, no_cache);
  EXPECT_EQ(A.fiber_cache().size(), 0u);
  auto first = fiber_graph_ptr(A, {21});
  auto second = fiber_graph_ptr(A, {21});
  EXPECT_EQ(first.get(), second.get());
  EXPECT_EQ(first->fiber.elements, cold.fiber.elements);
  EXPECT_EQ(first->components, cold.components);
}

TEST(FiberGraph, TooLarge) {
  auto A = admit_matrix({{1, 1, 1}});
  FiberOptions opts;
  opts.max_elements = 10;
  opts.use_cache = false;
  EXPECT_THROW(fiber_graph(A, {10}, opts), FiberTooLargeError);
  EXPECT_EQ(fiber_graph(A, {3}, opts).size(), 10u);
}

TEST(FiberGraph, SevenToTenGeneratingFibers) {
  auto A = admit_matrix({{7, 8, 9, 10}});
  auto fibers = generating_fibers(A);
  std::size_t total = 0;
  for (const auto& g : fibers) {
    EXPECT_GE(g.component_count(), 2u);
    total += g.component_count() - 1;
  }
  EXPECT_EQ(total, 6u);
  EXPECT_EQ(count_markov(fibers), 4);
}

TEST(FiberGraph, DotOutput) {
  auto A = admit_matrix({{1, 2, 3}});
  auto dot = render_dot(fiber_graph(A, {3}));
  EXPECT_EQ(dot.rfind("graph fiber_3 {", 0), 0u);
  EXPECT_NE(dot.find("--"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}
