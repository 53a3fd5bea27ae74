#pragma once

// Fibers F_t = {u in N^n : A u = t} and their fiber graphs, where u and v
// are adjacent whenever some coordinate is positive in both.

#include "toric/exactla.hpp"
#include "toric/move.hpp"
#include "toric/union_find.hpp"

#include <set>
#include <string>

namespace toric {

class FiberTooLargeError : public Error {
 public:
  FiberTooLargeError(const IntVector& key, std::size_t limit)
      : Error("fiber (" + to_string(key) + ") has more than " + std::to_string(limit) +
              " elements") {}
};

struct FiberOptions {
  std::size_t max_elements = 1'000'000;
  bool use_cache = true;
};

struct Fiber {
  IntVector key;
  std::vector<IntVector> elements;  // lexicographically ascending
};

struct FiberGraph {
  Fiber fiber;
  std::int64_t degree = 0;  // c . key
  std::vector<std::vector<std::size_t>> components;

  std::size_t size() const noexcept { return fiber.elements.size(); }
  std::size_t component_count() const noexcept { return components.size(); }
  std::vector<std::size_t> component_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& c : components) s.push_back(c.size());
    return s;
  }
  const IntVector& element(std::size_t component, std::size_t member) const {
    return fiber.elements[components[component][member]];
  }
};

namespace detail {

class FiberEnumerator {
 public:
  FiberEnumerator(const ConfigMatrix& A, const IntVector& t, std::size_t limit)
      : A_(A), n_(A.cols()), d_(A.rows()), limit_(limit), key_(t), residual_(t), u_(n_, 0) {
    // For each suffix of columns and row: 1 if all entries >= 0, 2 if all zero.
    sign_.assign((n_ + 1) * d_, 2);
    for (std::size_t j = n_; j-- > 0;)
      for (std::size_t r = 0; r < d_; ++r) {
        auto v = A.at(r, j);
        auto next = sign_[(j + 1) * d_ + r];
        sign_[j * d_ + r] = v < 0 ? 0 : (v > 0 ? (next == 0 ? 0 : 1) : next);
      }
  }

  std::vector<IntVector> run() {
    if (key_.size() != d_) throw Error("fiber key length does not match matrix rows");
    if (feasible(0)) recurse(0, A_.degree_of_key(key_));
    return std::move(out_);
  }

 private:
  bool feasible(std::size_t j) const {
    for (std::size_t r = 0; r < d_; ++r) {
      auto s = sign_[j * d_ + r];
      if (s == 2 && residual_[r] != 0) return false;
      if (s == 1 && residual_[r] < 0) return false;
    }
    return true;
  }

  void recurse(std::size_t j, std::int64_t degree) {
    if (j == n_) {
      // feasible(n) already forced a zero residual
      if (out_.size() >= limit_) throw FiberTooLargeError(key_, limit_);
      out_.push_back(u_);
      return;
    }
    const std::int64_t step = A_.column_degrees()[j];
    const std::int64_t bound = degree / step;
    for (std::int64_t k = 0; k <= bound; ++k) {
      u_[j] = k;
      if (k > 0)
        for (std::size_t r = 0; r < d_; ++r) residual_[r] -= A_.at(r, j);
      if (feasible(j + 1)) recurse(j + 1, degree - k * step);
    }
    for (std::size_t r = 0; r < d_; ++r) residual_[r] += bound * A_.at(r, j);
    u_[j] = 0;
  }

  const ConfigMatrix& A_;
  std::size_t n_, d_, limit_;
  IntVector key_, residual_, u_;
  std::vector<unsigned char> sign_;
  std::vector<IntVector> out_;
};

}  // namespace detail

// Every u >= 0 with A u = t, by depth-first search over coordinates with the
// grading bounding each coordinate. Empty when t is not in the semigroup.
inline Fiber enumerate_fiber(const ConfigMatrix& A, const IntVector& t,
                             const FiberOptions& opts = {}) {
  Fiber f;
  f.key = t;
  if (A.degree_of_key(t) < 0) return f;
  f.elements = detail::FiberEnumerator(A, t, opts.max_elements).run();
  return f;
}

// Components by clique contraction: all elements positive in coordinate i
// are merged, one coordinate at a time.
inline FiberGraph build_fiber_graph(const ConfigMatrix& A, Fiber fiber) {
  FiberGraph g;
  g.degree = A.degree_of_key(fiber.key);
  const std::size_t m = fiber.elements.size();
  UnionFind uf(m);
  for (std::size_t i = 0; i < A.cols(); ++i) {
    std::size_t first = m;
    for (std::size_t k = 0; k < m; ++k) {
      if (fiber.elements[k][i] == 0) continue;
      if (first == m)
        first = k;
      else
        uf.unite(first, k);
    }
  }
  g.components = uf.groups();
  g.fiber = std::move(fiber);
  return g;
}

inline std::shared_ptr<const FiberGraph> fiber_graph_ptr(const ConfigMatrix& A, const IntVector& t,
                                                         const FiberOptions& opts = {}) {
  if (opts.use_cache)
    if (auto hit = A.fiber_cache().find(t)) return hit;
  auto g = std::make_shared<const FiberGraph>(build_fiber_graph(A, enumerate_fiber(A, t, opts)));
  if (opts.use_cache) return A.fiber_cache().insert(t, std::move(g));
  return g;
}

inline FiberGraph fiber_graph(const ConfigMatrix& A, const IntVector& t,
                              const FiberOptions& opts = {}) {
  return *fiber_graph_ptr(A, t, opts);
}

// Fiber graphs of the distinct degrees of a generating set, keeping those
// that are disconnected; sorted by (c . t, t).
inline std::vector<FiberGraph> generating_fiber_graphs(const ConfigMatrix& A,
                                                       const std::vector<Move>& seed,
                                                       const FiberOptions& opts = {}) {
  std::set<std::pair<std::int64_t, IntVector>> keys;
  for (const auto& m : seed) keys.emplace(m.degree, m.fiber_key);
  std::vector<FiberGraph> out;
  for (const auto& [deg, key] : keys) {
    auto g = fiber_graph_ptr(A, key, opts);
    if (g->component_count() >= 2) out.push_back(*g);
  }
  return out;
}

// Every support-intersecting pair (a < b); quadratic, for rendering only.
inline std::vector<std::pair<std::size_t, std::size_t>> explicit_edges(const FiberGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  const auto& el = g.fiber.elements;
  for (std::size_t a = 0; a < el.size(); ++a)
    for (std::size_t b = a + 1; b < el.size(); ++b)
      for (std::size_t i = 0; i < el[a].size(); ++i)
        if (el[a][i] > 0 && el[b][i] > 0) {
          edges.emplace_back(a, b);
          break;
        }
  return edges;
}

}  // namespace toric
