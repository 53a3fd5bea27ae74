#pragma once

// Independent brute-force references used only by the tests. Nothing here
// calls into the library's algorithms.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;
using Mat = std::vector<Vec>;
using Rational = boost::multiprecision::cpp_rational;

inline Vec mul(const Mat& A, const Vec& u) {
  Vec t(A.size(), 0);
  for (std::size_t r = 0; r < A.size(); ++r)
    for (std::size_t c = 0; c < u.size(); ++c) t[r] += A[r][c] * u[c];
  return t;
}

inline Mat segre333() {
  Mat A(7, Vec(27));
  for (int k = 0; k < 27; ++k) {
    int a = k / 9, b = (k / 3) % 3, c = k % 3;
    A[0][k] = 1;
    A[1][k] = a == 0;
    A[2][k] = a == 1;
    A[3][k] = b == 0;
    A[4][k] = b == 1;
    A[5][k] = c == 0;
    A[6][k] = c == 1;
  }
  return A;
}

// Visits every vector v with lo <= v_i <= hi_i.
inline void for_each_in_box(std::int64_t lo, const Vec& hi, const std::function<void(const Vec&)>& f) {
  const std::size_t n = hi.size();
  Vec v(n, lo);
  while (true) {
    f(v);
    std::size_t k = 0;
    while (k < n && v[k] == hi[k]) v[k++] = lo;
    if (k == n) return;
    ++v[k];
  }
}

inline void for_each_in_box(std::size_t n, std::int64_t lo, std::int64_t hi,
                            const std::function<void(const Vec&)>& f) {
  for_each_in_box(lo, Vec(n, hi), f);
}

// {u in N^n : a . u = t} for a 1-row matrix of positive entries, by scanning
// the box u_i <= t (or u_i <= t / a_i when tight), sorted lexicographically.
inline std::vector<Vec> fiber_by_box(const Vec& a, std::int64_t t, bool tight = true) {
  std::vector<Vec> out;
  Vec hi(a.size(), t);
  if (tight)
    for (std::size_t i = 0; i < a.size(); ++i) hi[i] = t / a[i];
  for_each_in_box(0, hi, [&](const Vec& u) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * u[i];
    if (s == t) out.push_back(u);
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Components of the explicit support-intersection graph, by BFS; each
// component sorted, components ordered by smallest member.
inline std::vector<std::vector<std::size_t>> components_by_bfs(const std::vector<Vec>& elements) {
  const std::size_t m = elements.size();
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t i = 0; i < elements[a].size(); ++i)
        if (elements[a][i] > 0 && elements[b][i] > 0) {
          adj[a].push_back(b);
          adj[b].push_back(a);
          break;
        }
  std::vector<int> seen(m, 0);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < m; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      comp.push_back(x);
      for (auto y : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          q.push(y);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

// Components of the graph on `elements` joined by u - v = +-z for z in moves.
inline std::vector<std::vector<std::size_t>> components_by_moves(const std::vector<Vec>& elements,
                                                                 const std::vector<Vec>& moves) {
  const std::size_t m = elements.size();
  std::vector<std::size_t> label(m);
  std::iota(label.begin(), label.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return label[x] == x ? x : label[x] = root(label[x]);
  };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (const auto& z : moves) {
        bool plus = true, minus = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
          auto d = elements[a][i] - elements[b][i];
          plus = plus && d == z[i];
          minus = minus && d == -z[i];
        }
        if (plus || minus) {
          label[root(a)] = root(b);
          break;
        }
      }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t x = 0; x < m; ++x) groups[root(x)].push_back(x);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, g] : groups) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

// Pruefer encoding: repeatedly remove the smallest leaf and record its
// neighbour.
inline std::vector<std::size_t> prufer_encode(std::size_t n,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::set<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<std::size_t> seq;
  std::vector<int> removed(n, 0);
  for (std::size_t step = 0; step + 2 < n; ++step) {
    std::size_t leaf = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!removed[v] && adj[v].size() == 1) {
        leaf = v;
        break;
      }
    auto nb = *adj[leaf].begin();
    seq.push_back(nb);
    adj[nb].erase(leaf);
    adj[leaf].clear();
    removed[leaf] = 1;
  }
  return seq;
}

// All labelled trees on n vertices: edge subsets of size n-1 that connect.
inline std::vector<std::set<std::pair<std::size_t, std::size_t>>> all_labelled_trees(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) all.emplace_back(a, b);
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> trees;
  const std::size_t E = all.size();
  std::vector<int> pick(E, 0);
  std::fill(pick.end() - static_cast<long>(n - 1), pick.end(), 1);
  do {
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
      return comp[x] == x ? x : comp[x] = root(comp[x]);
    };
    std::set<std::pair<std::size_t, std::size_t>> t;
    bool acyclic = true;
    for (std::size_t e = 0; e < E; ++e) {
      if (!pick[e]) continue;
      auto [a, b] = all[e];
      if (root(a) == root(b)) acyclic = false;
      comp[root(a)] = root(b);
      t.insert(all[e]);
    }
    if (acyclic) trees.push_back(std::move(t));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return trees;
}

// Is z an integer combination of basis? Solves basis^T y = z over Q and
// checks y integral.
inline bool in_integer_span(const std::vector<Vec>& basis, const Vec& z) {
  const std::size_t k = basis.size(), n = z.size();
  if (k == 0) return std::all_of(z.begin(), z.end(), [](auto v) { return v == 0; });
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) M[i][j] = basis[j][i];
    M[i][k] = z[i];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivcol;
  for (std::size_t c = 0; c < k && row < n; ++c) {
    std::size_t p = row;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(M[p], M[row]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || M[i][c] == 0) continue;
      Rational f = M[i][c] / M[row][c];
      for (std::size_t j = c; j <= k; ++j) M[i][j] -= f * M[row][j];
    }
    pivcol.push_back(c);
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (M[i][k] != 0) return false;
  for (std::size_t i = 0; i < row; ++i) {
    Rational y = M[i][k] / M[i][pivcol[i]];
    if (denominator(y) != 1) return false;
  }
  return true;
}

// Rank over Q.
inline std::size_t rank(const Mat& A) {
  std::vector<std::vector<Rational>> M;
  for (const auto& r : A) M.emplace_back(r.begin(), r.end());
  std::size_t row = 0;
  const std::size_t cols = M.empty() ? 0 : M[0].size();
  for (std::size_t c = 0; c < cols && row < M.size(); ++c) {
    std::size_t p = row;
    while (p < M.size() && M[p][c] == 0) ++p;
    if (p == M.size()) continue;
    std::swap(M[p], M[row]);
    for (std::size_t i = row + 1; i < M.size(); ++i) {
      Rational f = M[i][c] / M[row][c];
      for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[row][j];
    }
    ++row;
  }
  return row;
}

// Per-fiber component structure found by greedy completion over a 1-row
// matrix with positive entries: walk degrees 1..max_degree, enumerate each
// fiber, join elements with the moves found so far, and bridge any
// remaining components with new moves. Returns degree -> sorted component
// sizes for every degree that needed bridging.
inline std::map<std::int64_t, std::vector<std::size_t>> greedy_fiber_structure(
    const Vec& a, std::int64_t max_degree) {
  std::map<std::int64_t, std::vector<std::size_t>> out;
  std::vector<Vec> moves;
  for (std::int64_t t = 1; t <= max_degree; ++t) {
    auto F = fiber_by_box(a, t);
    if (F.size() < 2) continue;
    auto comps = components_by_moves(F, moves);
    if (comps.size() < 2) continue;
    std::vector<std::size_t> sizes;
    for (const auto& c : comps) sizes.push_back(c.size());
    std::sort(sizes.begin(), sizes.end());
    out[t] = sizes;
    for (std::size_t k = 1; k < comps.size(); ++k) {
      Vec z(a.size());
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = F[comps[0][0]][i] - F[comps[k][0]][i];
      moves.push_back(z);
    }
  }
  return out;
}

}  // namespace oracle
