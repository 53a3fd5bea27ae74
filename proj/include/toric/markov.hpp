#pragma once

// Minimal Markov bases from fiber graphs. Every minimal Markov basis picks,
// for each generating fiber t, a spanning tree on the components of G_t and
// one element from each endpoint component of every tree edge.

#include "toric/exactla.hpp"
#include "toric/fibergraph.hpp"
#include "toric/move.hpp"
#include "toric/prufer.hpp"
#include "toric/seedbasis.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>

namespace toric {

enum class BasisKind { seed, minimal, universal, indispensable, sample };

inline const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::seed: return "seed";
    case BasisKind::minimal: return "minimal";
    case BasisKind::universal: return "universal";
    case BasisKind::indispensable: return "indispensable";
    case BasisKind::sample: return "sample";
  }
  return "?";
}

struct MarkovBasis {
  std::vector<Move> moves;  // canonical order, no duplicates
  BasisKind kind = BasisKind::minimal;

  std::size_t size() const noexcept { return moves.size(); }
  bool operator==(const MarkovBasis& o) const { return moves == o.moves; }
};

inline MarkovBasis make_basis(std::vector<Move> moves, BasisKind kind) {
  std::sort(moves.begin(), moves.end());
  moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
  return {std::move(moves), kind};
}

using BigCount = BigInt;

class LimitExceededError : public Error {
 public:
  using Error::Error;
};

struct Disconnection {
  IntVector fiber_key;
  IntVector first;
  IntVector second;
};

class NotGeneratingError : public Error {
 public:
  explicit NotGeneratingError(Disconnection where)
      : Error("moves do not connect fiber (" + to_string(where.fiber_key) + "): (" +
              to_string(where.first) + ") and (" + to_string(where.second) +
              ") are not joined"),
        where_(std::move(where)) {}
  const Disconnection& where() const noexcept { return where_; }

 private:
  Disconnection where_;
};

class SeedRejectedError : public Error {
 public:
  using Error::Error;
};

struct Verdict {
  bool generates = false;
  bool minimal = false;
  std::optional<Disconnection> certificate;
};

namespace detail {

// Components of G_{M,t}: u ~ u - z whenever u - z >= 0, for z in moves.
inline std::vector<std::vector<std::size_t>> move_components(const FiberGraph& g,
                                                             std::span<const Move* const> moves) {
  const auto& el = g.fiber.elements;
  UnionFind uf(el.size());
  IntVector v;
  for (std::size_t k = 0; k < el.size(); ++k) {
    for (const Move* m : moves) {
      const auto& z = m->vector;
      if (m->degree > g.degree) continue;
      for (int sign : {1, -1}) {
        v = el[k];
        bool ok = true;
        for (std::size_t i = 0; i < v.size() && ok; ++i) {
          v[i] -= sign * z[i];
          ok = v[i] >= 0;
        }
        if (!ok) continue;
        auto it = std::lower_bound(el.begin(), el.end(), v);
        if (it != el.end() && *it == v) uf.unite(k, static_cast<std::size_t>(it - el.begin()));
      }
    }
  }
  return uf.groups();
}

inline std::optional<Disconnection> first_disconnection(std::span<const FiberGraph> fibers,
                                                        std::span<const Move* const> moves) {
  for (const auto& g : fibers) {
    auto comps = move_components(g, moves);
    if (comps.size() > 1)
      return Disconnection{g.fiber.key, g.fiber.elements[comps[0][0]],
                           g.fiber.elements[comps[1][0]]};
  }
  return std::nullopt;
}

inline std::size_t minimal_size(std::span<const FiberGraph> fibers) {
  std::size_t s = 0;
  for (const auto& g : fibers) s += g.component_count() - 1;
  return s;
}

}  // namespace detail

// Checks that moves connect every reference fiber, and whether they do so
// minimally.
inline Verdict verify_markov_basis(const ConfigMatrix& A, const std::vector<Move>& moves,
                                   std::span<const FiberGraph> reference_fibers) {
  for (const auto& m : moves)
    if (!A.in_kernel(m.vector)) throw MovesNotInKernelError(m.vector);
  std::vector<const Move*> ptrs;
  for (const auto& m : moves) ptrs.push_back(&m);

  Verdict v;
  v.certificate = detail::first_disconnection(reference_fibers, ptrs);
  v.generates = !v.certificate;
  if (!v.generates) return v;
  if (moves.size() != detail::minimal_size(reference_fibers)) return v;
  v.minimal = true;
  for (std::size_t k = 0; k < ptrs.size() && v.minimal; ++k) {
    std::vector<const Move*> rest;
    for (std::size_t j = 0; j < ptrs.size(); ++j)
      if (j != k) rest.push_back(ptrs[j]);
    v.minimal = detail::first_disconnection(reference_fibers, rest).has_value();
  }
  return v;
}

inline Verdict verify_markov_basis(const ConfigMatrix& A, const std::vector<Move>& moves,
                                   const std::vector<IntVector>& reference_keys,
                                   const FiberOptions& opts = {}) {
  std::vector<FiberGraph> fibers;
  for (const auto& t : reference_keys) fibers.push_back(fiber_graph(A, t, opts));
  return verify_markov_basis(A, moves, fibers);
}

// Row-style Hermite normal form of the lattice spanned by vectors.
inline std::vector<IntVector> lattice_hnf(std::vector<IntVector> rows) {
  if (rows.empty()) return {};
  const std::size_t n = rows[0].size();
  std::vector<std::vector<BigInt>> R;
  for (const auto& r : rows) R.emplace_back(r.begin(), r.end());
  std::size_t top = 0;
  for (std::size_t c = 0; c < n && top < R.size(); ++c) {
    while (true) {
      std::size_t best = R.size();
      for (std::size_t i = top; i < R.size(); ++i)
        if (R[i][c] != 0 && (best == R.size() || abs(R[i][c]) < abs(R[best][c]))) best = i;
      if (best == R.size()) break;
      std::swap(R[top], R[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < R.size(); ++i) {
        if (R[i][c] == 0) continue;
        BigInt q = R[i][c] / R[top][c];
        for (std::size_t k = c; k < n; ++k) R[i][k] -= q * R[top][k];
        if (R[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (R[top][c] == 0) continue;
    if (R[top][c] < 0)
      for (auto& x : R[top]) x = -x;
    for (std::size_t i = 0; i < top; ++i) {
      BigInt q = R[i][c] / R[top][c];
      if (R[i][c] - q * R[top][c] < 0) q -= 1;
      if (q != 0)
        for (std::size_t k = c; k < n; ++k) R[i][k] -= q * R[top][k];
    }
    ++top;
  }
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < top; ++i) {
    IntVector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = to_int64(R[i][k]);
    out.push_back(std::move(v));
  }
  return out;
}

// One generating set of I_A computed from scratch, checked to connect the
// fibers of its own degrees.
inline MarkovBasis seed_markov_basis(const ConfigMatrix& A, const SeedOptions& seed_opts = {},
                                     const FiberOptions& fiber_opts = {}) {
  auto moves = seed_moves(A, seed_opts);
  auto fibers = generating_fiber_graphs(A, moves, fiber_opts);
  auto verdict = verify_markov_basis(A, moves, fibers);
  if (!verdict.generates) throw NotGeneratingError(*verdict.certificate);
  return make_basis(std::move(moves), BasisKind::seed);
}

// An externally supplied generating set. Accepted when every move lies in
// ker(A), the moves span the whole kernel lattice, and they connect the
// fiber of each of their own degrees.
inline MarkovBasis accept_seed_basis(const ConfigMatrix& A, const std::vector<IntVector>& vectors,
                                     const FiberOptions& fiber_opts = {}) {
  std::vector<Move> moves;
  for (const auto& z : vectors) moves.push_back(Move::from_vector(A, z));
  auto want = lattice_hnf(kernel_lattice_basis(A).vectors);
  if (lattice_hnf(vectors) != want)
    throw SeedRejectedError("supplied moves do not span the kernel lattice of the matrix");
  std::vector<FiberGraph> own;
  {
    std::set<std::pair<std::int64_t, IntVector>> keys;
    for (const auto& m : moves) keys.emplace(m.degree, m.fiber_key);
    for (const auto& [d, key] : keys) own.push_back(fiber_graph(A, key, fiber_opts));
  }
  auto verdict = verify_markov_basis(A, moves, own);
  if (!verdict.generates)
    throw SeedRejectedError(std::string("supplied moves are not a Markov basis: ") +
                            NotGeneratingError(*verdict.certificate).what());
  return make_basis(std::move(moves), BasisKind::seed);
}

struct MarkovOptions {
  SeedOptions seed;
  FiberOptions fibers;
  std::optional<std::vector<IntVector>> seed_basis;  // bypasses completion
};

// Disconnected fiber graphs of A, from the built-in or a supplied seed.
inline std::vector<FiberGraph> generating_fibers(const ConfigMatrix& A,
                                                 const MarkovOptions& opts = {}) {
  auto seed = opts.seed_basis ? accept_seed_basis(A, *opts.seed_basis, opts.fibers)
                              : seed_markov_basis(A, opts.seed, opts.fibers);
  return generating_fiber_graphs(A, seed.moves, opts.fibers);
}

inline std::vector<IntVector> fiber_keys(std::span<const FiberGraph> fibers) {
  std::vector<IntVector> keys;
  for (const auto& g : fibers) keys.push_back(g.fiber.key);
  return keys;
}

// prod_t (prod_i m_{t,i}) * (sum_i m_{t,i})^(n_t - 2)
inline BigCount count_markov(std::span<const FiberGraph> fibers) {
  BigCount total = 1;
  for (const auto& g : fibers) {
    BigCount sum = 0;
    for (const auto& c : g.components) {
      total *= c.size();
      sum += c.size();
    }
    for (std::size_t e = 2; e < g.component_count(); ++e) total *= sum;
  }
  return total;
}

inline BigCount count_markov(const ConfigMatrix& A, const MarkovOptions& opts = {}) {
  return count_markov(generating_fibers(A, opts));
}

// Lazy stream of all minimal Markov bases. Order: fibers as given (the last
// one varies fastest); within a fiber, Pruefer sequences in lexicographic
// order and for each tree the endpoint choices in lexicographic order over
// the sorted tree edges.
class MarkovBasesStream {
 public:
  MarkovBasesStream(const ConfigMatrix& A, std::vector<FiberGraph> fibers)
      : A_(&A), fibers_(std::move(fibers)) {
    for (const auto& g : fibers_) cursors_.emplace_back(g);
  }
  // Cursors point into fibers_, whose buffer survives a move but not a copy.
  MarkovBasesStream(const MarkovBasesStream&) = delete;
  MarkovBasesStream& operator=(const MarkovBasesStream&) = delete;
  MarkovBasesStream(MarkovBasesStream&&) = default;
  MarkovBasesStream& operator=(MarkovBasesStream&&) = default;

  std::optional<MarkovBasis> next() {
    if (done_) return std::nullopt;
    MarkovBasis b = current();
    advance();
    return b;
  }

  const std::vector<FiberGraph>& fibers() const noexcept { return fibers_; }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = MarkovBasis;
    using difference_type = std::ptrdiff_t;
    using pointer = const MarkovBasis*;
    using reference = const MarkovBasis&;

    iterator() = default;
    explicit iterator(MarkovBasesStream* s) : s_(s) { ++*this; }
    reference operator*() const { return *cur_; }
    pointer operator->() const { return &*cur_; }
    iterator& operator++() {
      cur_ = s_->next();
      if (!cur_) s_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return s_ == o.s_; }

   private:
    MarkovBasesStream* s_ = nullptr;
    std::optional<MarkovBasis> cur_;
  };
  iterator begin() { return iterator(this); }
  iterator end() { return iterator(); }

 private:
  struct Cursor {
    const FiberGraph* g;
    std::vector<std::size_t> seq;
    std::vector<TreeEdge> edges;
    std::vector<std::size_t> choice;  // two digits per edge
    std::vector<std::size_t> radix;

    explicit Cursor(const FiberGraph& graph) : g(&graph) {
      seq.assign(g->component_count() - 2, 0);
      load_tree();
    }
    void load_tree() {
      edges = prufer_tree(seq, g->component_count());
      std::sort(edges.begin(), edges.end());
      radix.clear();
      for (auto [a, b] : edges) {
        radix.push_back(g->components[a].size());
        radix.push_back(g->components[b].size());
      }
      choice.assign(radix.size(), 0);
    }
    // false when wrapped back to the first state
    bool advance() {
      for (std::size_t k = choice.size(); k-- > 0;) {
        if (++choice[k] < radix[k]) return true;
        choice[k] = 0;
      }
      bool carried = true;
      for (std::size_t k = seq.size(); k-- > 0;) {
        if (++seq[k] < g->component_count()) {
          carried = false;
          break;
        }
        seq[k] = 0;
      }
      load_tree();
      return !carried;
    }
    void emit(const ConfigMatrix& A, std::vector<Move>& out) const {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        out.push_back(Move::between(A, g->element(a, choice[2 * e]),
                                    g->element(b, choice[2 * e + 1])));
      }
    }
  };

  MarkovBasis current() const {
    std::vector<Move> moves;
    for (const auto& c : cursors_) c.emit(*A_, moves);
    return make_basis(std::move(moves), BasisKind::minimal);
  }

  void advance() {
    for (std::size_t k = cursors_.size(); k-- > 0;)
      if (cursors_[k].advance()) return;
    done_ = true;
  }

  const ConfigMatrix* A_;
  std::vector<FiberGraph> fibers_;
  std::vector<Cursor> cursors_;
  bool done_ = false;
};

inline MarkovBasesStream markov_bases(const ConfigMatrix& A, const MarkovOptions& opts = {}) {
  return MarkovBasesStream(A, generating_fibers(A, opts));
}

// Materializes the whole stream, refusing when there are more than limit bases.
inline std::vector<MarkovBasis> collect_markov_bases(const ConfigMatrix& A,
                                                     std::vector<FiberGraph> fibers,
                                                     std::size_t limit = 100'000) {
  auto total = count_markov(fibers);
  if (total > limit)
    throw LimitExceededError(total.str() + " minimal Markov bases exceed the limit of " +
                             std::to_string(limit));
  std::vector<MarkovBasis> out;
  MarkovBasesStream s(A, std::move(fibers));
  while (auto b = s.next()) out.push_back(std::move(*b));
  return out;
}

// Source of the sampler's random decisions.
template <class C>
concept Chooser = requires(C& c, std::span<const std::uint64_t> w, std::size_t n) {
  { c.weighted(w) } -> std::convertible_to<std::size_t>;
  { c.uniform(n) } -> std::convertible_to<std::size_t>;
};

// mt19937_64 with rejection sampling for bounded draws, so a seed gives the
// same samples on every platform.
class RngChooser {
 public:
  explicit RngChooser(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (std::numeric_limits<std::uint64_t>::max() / bound);
    std::uint64_t x;
    do x = rng_();
    while (x >= limit);
    return x % bound;
  }
  std::size_t uniform(std::size_t n) { return static_cast<std::size_t>(below(n)); }
  std::size_t weighted(std::span<const std::uint64_t> w) {
    std::uint64_t total = 0;
    for (auto x : w) total += x;
    auto r = below(total);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (r < w[i]) return i;
      r -= w[i];
    }
    return w.size() - 1;
  }

 private:
  std::mt19937_64 rng_;
};

// One minimal Markov basis, uniformly over all of them. Pruefer symbols are
// drawn with probability proportional to component size: a tree with vertex
// degrees deg_j then has probability prod_j (m_j / S)^(deg_j - 1) and
// prod_j m_j^deg_j endpoint choices, so every basis has probability
// 1 / (prod_j m_j * S^(k-2)).
template <Chooser C>
MarkovBasis sample_markov_basis(const ConfigMatrix& A, std::span<const FiberGraph> fibers,
                                C& chooser) {
  std::vector<Move> moves;
  for (const auto& g : fibers) {
    const std::size_t k = g.component_count();
    std::vector<std::uint64_t> weights;
    for (const auto& c : g.components) weights.push_back(c.size());
    std::vector<std::size_t> seq(k - 2);
    for (auto& s : seq) s = chooser.weighted(weights);
    auto edges = prufer_tree(seq, k);
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) {
      auto ia = chooser.uniform(g.components[a].size());
      auto ib = chooser.uniform(g.components[b].size());
      moves.push_back(Move::between(A, g.element(a, ia), g.element(b, ib)));
    }
  }
  return make_basis(std::move(moves), BasisKind::sample);
}

inline std::vector<MarkovBasis> random_markov(const ConfigMatrix& A,
                                              std::span<const FiberGraph> fibers,
                                              std::uint64_t rng_seed, std::size_t count = 1) {
  if (count < 1) throw Error("sample count must be at least 1");
  RngChooser chooser(rng_seed);
  std::vector<MarkovBasis> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_markov_basis(A, fibers, chooser));
  return out;
}

inline std::vector<MarkovBasis> random_markov(const ConfigMatrix& A, std::uint64_t rng_seed,
                                              std::size_t count = 1,
                                              const MarkovOptions& opts = {}) {
  return random_markov(A, generating_fibers(A, opts), rng_seed, count);
}

// Moves of fibers consisting of exactly two singleton components.
inline MarkovBasis indispensable_set(const ConfigMatrix& A, std::span<const FiberGraph> fibers) {
  std::vector<Move> moves;
  for (const auto& g : fibers)
    if (g.size() == 2 && g.component_count() == 2)
      moves.push_back(Move::between(A, g.fiber.elements[0], g.fiber.elements[1]));
  return make_basis(std::move(moves), BasisKind::indispensable);
}

inline MarkovBasis indispensable_set(const ConfigMatrix& A, const MarkovOptions& opts = {}) {
  return indispensable_set(A, generating_fibers(A, opts));
}

// Differences of every pair of elements lying in distinct components of a
// generating fiber.
inline MarkovBasis universal_markov(const ConfigMatrix& A, std::span<const FiberGraph> fibers) {
  std::vector<Move> moves;
  for (const auto& g : fibers)
    for (std::size_t a = 0; a < g.component_count(); ++a)
      for (std::size_t b = a + 1; b < g.component_count(); ++b)
        for (auto u : g.components[a])
          for (auto v : g.components[b])
            moves.push_back(Move::between(A, g.fiber.elements[u], g.fiber.elements[v]));
  return make_basis(std::move(moves), BasisKind::universal);
}

inline MarkovBasis universal_markov(const ConfigMatrix& A, const MarkovOptions& opts = {}) {
  return universal_markov(A, generating_fibers(A, opts));
}

// The first basis of the enumeration built from the fibers of seed.
// reference_fibers, when given, are checked to be connected by seed.
inline MarkovBasis minimize(const ConfigMatrix& A, const std::vector<Move>& seed,
                            std::optional<std::span<const FiberGraph>> reference_fibers = {},
                            const FiberOptions& opts = {}) {
  auto fibers = generating_fiber_graphs(A, seed, opts);
  auto verdict = verify_markov_basis(A, seed, reference_fibers ? *reference_fibers
                                                               : std::span<const FiberGraph>(fibers));
  if (!verdict.generates) throw NotGeneratingError(*verdict.certificate);
  MarkovBasesStream s(A, std::move(fibers));
  return *s.next();
}

}  // namespace toric
