#pragma once

// Binomial Buchberger completion and lattice-ideal saturation: computes a
// (not necessarily minimal) Markov basis of A from its kernel lattice.

#include "toric/exactla.hpp"
#include "toric/move.hpp"

#include <chrono>
#include <optional>
#include <set>
#include <string>

namespace toric {

class BudgetExceededError : public Error {
 public:
  explicit BudgetExceededError(const std::string& progress)
      : Error("completion budget exceeded: " + progress) {}
};

struct CompletionBudget {
  std::size_t max_pairs = 1'000'000;
  std::optional<std::chrono::milliseconds> max_time;
};

// Weighted graded reverse-lexicographic order. Monomials are compared by
// weighted degree, then by the exponent of the cheapest variable (smaller
// exponent wins), then the next cheapest, and so on.
struct TermOrder {
  IntVector weights;
  std::vector<std::size_t> cheapest_first;

  static TermOrder grevlex(IntVector weights, std::size_t last_variable) {
    TermOrder o;
    const std::size_t n = weights.size();
    o.weights = std::move(weights);
    o.cheapest_first.push_back(last_variable);
    for (std::size_t k = n; k-- > 0;)
      if (k != last_variable) o.cheapest_first.push_back(k);
    return o;
  }

  std::int64_t degree(const IntVector& u) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i]) s = checked_add(s, checked_mul(weights[i], u[i]));
    return s;
  }

  // Negative if a < b, positive if a > b.
  int compare(const IntVector& a, const IntVector& b) const {
    auto da = degree(a), db = degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (auto v : cheapest_first)
      if (a[v] != b[v]) return a[v] < b[v] ? 1 : -1;
    return 0;
  }
};

// x^lead - x^trail with lead > trail under the owning order.
struct Binomial {
  IntVector lead;
  IntVector trail;

  IntVector difference() const {
    IntVector z(lead.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = lead[i] - trail[i];
    return z;
  }
  bool operator==(const Binomial&) const = default;
};

struct BinomialGB {
  std::vector<Binomial> elements;
  TermOrder order;
};

// Counts S-pairs and wall time over one or more completion runs.
class CompletionMeter {
 public:
  explicit CompletionMeter(CompletionBudget budget = {})
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  void tick(const char* stage, std::size_t basis_size, std::size_t queued) {
    ++pairs_;
    bool over = pairs_ > budget_.max_pairs;
    if (!over && budget_.max_time && (pairs_ & 255) == 0)
      over = std::chrono::steady_clock::now() - start_ > *budget_.max_time;
    if (over)
      throw BudgetExceededError(std::string(stage) + ", " + std::to_string(pairs_) +
                                " S-pairs processed, " + std::to_string(basis_size) +
                                " basis elements, " + std::to_string(queued) + " pairs queued");
  }
  std::size_t pairs() const noexcept { return pairs_; }
  std::string stage = "buchberger";

 private:
  CompletionBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::size_t pairs_ = 0;
};

namespace detail {

inline std::uint64_t support_signature(const IntVector& u) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0) s |= std::uint64_t{1} << (i & 63);
  return s;
}

inline bool divides(const IntVector& a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline IntVector lcm_of(const IntVector& a, const IntVector& b) {
  IntVector m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

inline bool coprime(const IntVector& a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

class BinomialEngine {
 public:
  BinomialEngine(TermOrder order, std::vector<bool> cancel_vars, CompletionMeter& meter)
      : order_(std::move(order)), cancel_(std::move(cancel_vars)), meter_(meter) {}

  void add_generator(const Binomial& b) {
    auto r = normalize(b.lead, b.trail);
    if (r) insert(std::move(*r));
  }

  void complete() {
    while (!pairs_.empty()) {
      Pair p = *pairs_.begin();
      pairs_.erase(pairs_.begin());
      meter_.tick(meter_.stage.c_str(), elems_.size(), pairs_.size());
      const Elem& f = elems_[p.i];
      const Elem& g = elems_[p.j];
      IntVector s1(p.lcm), s2(p.lcm);
      for (std::size_t k = 0; k < s1.size(); ++k) {
        s1[k] = s1[k] - f.b.lead[k] + f.b.trail[k];
        s2[k] = s2[k] - g.b.lead[k] + g.b.trail[k];
      }
      auto r = normalize(std::move(s1), std::move(s2));
      if (r) insert(std::move(*r));
    }
  }

  // Minimal, tail-reduced basis from the active elements.
  std::vector<Binomial> reduced_basis() {
    std::vector<Binomial> out;
    for (std::size_t k = 0; k < elems_.size(); ++k) {
      if (!elems_[k].active) continue;
      Binomial b = elems_[k].b;
      b.trail = normal_form(std::move(b.trail));
      out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(), [&](const Binomial& a, const Binomial& b) {
      int c = order_.compare(a.lead, b.lead);
      return c != 0 ? c < 0 : a.trail < b.trail;
    });
    return out;
  }

 private:
  struct Elem {
    Binomial b;
    std::uint64_t sig = 0;
    std::int64_t degree = 0;
    bool active = true;
  };
  struct Pair {
    std::int64_t degree;
    IntVector lcm;
    std::size_t i, j;
    bool operator<(const Pair& o) const {
      return std::tie(degree, lcm, i, j) < std::tie(o.degree, o.lcm, o.i, o.j);
    }
  };

  IntVector normal_form(IntVector p) const {
    std::uint64_t sig = support_signature(p);
    std::int64_t deg = order_.degree(p);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k : active_) {
        const Elem& e = elems_[k];
        if ((e.sig & ~sig) != 0 || e.degree > deg || !divides(e.b.lead, p)) continue;
        for (std::size_t v = 0; v < p.size(); ++v) p[v] += e.b.trail[v] - e.b.lead[v];
        sig = support_signature(p);
        changed = true;
        break;
      }
    }
    return p;
  }

  // Full normal form of x^p - x^q with common factors cancelled;
  // nullopt when it reduces to zero.
  std::optional<Binomial> normalize(IntVector p, IntVector q) const {
    while (true) {
      p = normal_form(std::move(p));
      q = normal_form(std::move(q));
      if (p == q) return std::nullopt;
      bool cancelled = false;
      for (std::size_t v = 0; v < p.size(); ++v) {
        if (!cancel_[v]) continue;
        auto c = std::min(p[v], q[v]);
        if (c > 0) {
          p[v] -= c;
          q[v] -= c;
          cancelled = true;
        }
      }
      if (!cancelled) break;
    }
    for (std::size_t v = 0; v < p.size(); ++v)
      if (std::llabs(p[v]) > (std::int64_t{1} << 40) || std::llabs(q[v]) > (std::int64_t{1} << 40))
        throw OverflowError("binomial exponent exceeds 2^40");
    if (order_.compare(p, q) < 0) std::swap(p, q);
    return Binomial{std::move(p), std::move(q)};
  }

  // Gebauer-Moeller update followed by insertion of h.
  void insert(Binomial h) {
    const std::size_t hi = elems_.size();
    Elem e;
    e.sig = support_signature(h.lead);
    e.degree = order_.degree(h.lead);
    e.b = std::move(h);
    elems_.push_back(std::move(e));
    const IntVector& H = elems_[hi].b.lead;

    struct Candidate {
      Pair pair;
      bool coprime;
      bool keep = true;
    };
    std::vector<Candidate> cands;
    cands.reserve(active_.size());
    for (std::size_t g : active_) {
      const IntVector& G = elems_[g].b.lead;
      IntVector l = lcm_of(G, H);
      std::int64_t d = order_.degree(l);
      cands.push_back({Pair{d, std::move(l), g, hi}, coprime(G, H)});
    }
    // Criterion M/F: drop a pair whose lcm is divisible by another
    // candidate's lcm (equal lcms keep exactly one).
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (cands[a].coprime) continue;
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b || !cands[b].keep) continue;
        if (divides(cands[b].pair.lcm, cands[a].pair.lcm)) {
          cands[a].keep = false;
          break;
        }
      }
    }
    // Criterion B on queued pairs.
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      if (divides(H, it->lcm) &&
          lcm_of(elems_[it->i].b.lead, H) != it->lcm &&
          lcm_of(elems_[it->j].b.lead, H) != it->lcm)
        it = pairs_.erase(it);
      else
        ++it;
    }
    for (auto& c : cands)
      if (c.keep && !c.coprime) pairs_.insert(std::move(c.pair));

    std::vector<std::size_t> still;
    still.reserve(active_.size() + 1);
    for (std::size_t g : active_) {
      if (divides(H, elems_[g].b.lead))
        elems_[g].active = false;
      else
        still.push_back(g);
    }
    still.push_back(hi);
    active_ = std::move(still);
  }

  TermOrder order_;
  std::vector<bool> cancel_;
  CompletionMeter& meter_;
  std::vector<Elem> elems_;
  std::vector<std::size_t> active_;
  std::set<Pair> pairs_;
};

}  // namespace detail

// Reduced Groebner basis of the binomial ideal generated by gens. Common
// factors in the variables flagged by cancel_vars are divided out whenever
// they appear; pass an all-false mask for a plain Buchberger run.
inline BinomialGB buchberger(const std::vector<Binomial>& gens, const TermOrder& order,
                             CompletionMeter& meter, std::vector<bool> cancel_vars = {}) {
  const std::size_t n = order.weights.size();
  if (cancel_vars.empty()) cancel_vars.assign(n, false);
  detail::BinomialEngine engine(order, std::move(cancel_vars), meter);
  for (const auto& g : gens) engine.add_generator(g);
  engine.complete();
  return BinomialGB{engine.reduced_basis(), order};
}

inline BinomialGB buchberger(const std::vector<Binomial>& gens, const TermOrder& order,
                             const CompletionBudget& budget = {}) {
  CompletionMeter meter(budget);
  return buchberger(gens, order, meter);
}

// Binomial with the two monomials of z, ordered under `order`.
inline Binomial binomial_of(const IntVector& z, const TermOrder& order) {
  Binomial b{positive_part(z), negative_part(z)};
  if (order.compare(b.lead, b.trail) < 0) std::swap(b.lead, b.trail);
  return b;
}

// (ideal : x_i^inf) from a Groebner basis under a reverse-lex order with x_i
// cheapest: every element is divided by its common power of x_i.
inline BinomialGB saturate_variable(BinomialGB gb, std::size_t i) {
  for (auto& b : gb.elements) {
    auto c = std::min(b.lead[i], b.trail[i]);
    b.lead[i] -= c;
    b.trail[i] -= c;
  }
  return gb;
}

struct SeedOptions {
  CompletionBudget budget;
};

inline std::vector<Move> moves_from(const ConfigMatrix& A, const std::vector<Binomial>& bs) {
  std::set<Move> uniq;
  for (const auto& b : bs) uniq.insert(Move::from_vector(A, b.difference()));
  return {uniq.begin(), uniq.end()};
}

// Generating set of I_A: lattice basis ideal, then one completion per
// variable in ascending order with that variable cheapest, saturating after
// each. Returned moves are canonical and sorted.
inline std::vector<Move> seed_moves(const ConfigMatrix& A, const SeedOptions& opts = {}) {
  const std::size_t n = A.cols();
  auto lattice = kernel_lattice_basis(A);
  if (lattice.vectors.empty()) return {};
  CompletionMeter meter(opts.budget);
  // The toric ideal is saturated in every variable, so cancelling any common
  // monomial factor keeps each intermediate ideal inside I_A.
  std::vector<bool> cancel(n, true);
  std::vector<Binomial> current;
  {
    auto order = TermOrder::grevlex(A.column_degrees(), 0);
    for (const auto& z : lattice.vectors) current.push_back(binomial_of(z, order));
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto order = TermOrder::grevlex(A.column_degrees(), i);
    for (auto& b : current)
      if (order.compare(b.lead, b.trail) < 0) std::swap(b.lead, b.trail);
    meter.stage = "saturating variable " + std::to_string(i + 1) + " of " + std::to_string(n);
    auto gb = saturate_variable(buchberger(current, order, meter, cancel), i);
    current = std::move(gb.elements);
  }
  return moves_from(A, current);
}

}  // namespace toric
