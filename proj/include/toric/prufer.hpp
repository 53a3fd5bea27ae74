#pragma once

#include "toric/common.hpp"

#include <functional>
#include <queue>
#include <utility>
#include <vector>

namespace toric {

class BadSequenceError : public Error {
 public:
  using Error::Error;
};

using TreeEdge = std::pair<std::size_t, std::size_t>;  // first < second

// Labelled tree on {0..n-1} encoded by seq: each symbol in turn is joined to
// the smallest current leaf, and the last two remaining labels are joined.
// Edges are returned in decoding order.
inline std::vector<TreeEdge> prufer_tree(const std::vector<std::size_t>& seq, std::size_t n) {
  if (n < 2) throw BadSequenceError("a Pruefer tree needs at least 2 vertices");
  if (seq.size() != n - 2)
    throw BadSequenceError("sequence length " + std::to_string(seq.size()) + " != n - 2 = " +
                           std::to_string(n - 2));
  std::vector<std::size_t> degree(n, 1);
  for (auto s : seq) {
    if (s >= n) throw BadSequenceError("label " + std::to_string(s) + " out of range");
    ++degree[s];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> leaves;
  for (std::size_t v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  std::vector<TreeEdge> edges;
  edges.reserve(n - 1);
  for (auto s : seq) {
    auto leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
    if (--degree[s] == 1) leaves.push(s);
  }
  auto a = leaves.top();
  leaves.pop();
  auto b = leaves.top();
  edges.emplace_back(std::min(a, b), std::max(a, b));
  return edges;
}

}  // namespace toric
