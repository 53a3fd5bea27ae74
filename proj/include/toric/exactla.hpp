#pragma once

// Exact linear algebra over Z and Q: configuration-matrix admission,
// positive gradings and the saturated kernel lattice.

#include "toric/common.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace toric {

struct FiberGraph;

class EmptyMatrixError : public Error {
 public:
  EmptyMatrixError() : Error("matrix must have at least one row and one column") {}
};

class RaggedMatrixError : public Error {
 public:
  RaggedMatrixError() : Error("matrix rows have different lengths") {}
};

class ZeroColumnError : public Error {
 public:
  explicit ZeroColumnError(std::size_t column)
      : Error("column " + std::to_string(column + 1) + " is the zero vector"),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// Raised when a nonzero nonnegative kernel vector exists.
class NotConfigurationError : public Error {
 public:
  explicit NotConfigurationError(IntVector certificate)
      : Error("not a configuration matrix: nonnegative kernel vector (" +
              to_string(certificate) + ")"),
        certificate_(std::move(certificate)) {}
  const IntVector& certificate() const noexcept { return certificate_; }

 private:
  IntVector certificate_;
};

using RawMatrix = std::vector<IntVector>;

struct Grading {
  IntVector c;
};

struct LatticeBasis {
  std::vector<IntVector> vectors;
  std::size_t rank() const noexcept { return vectors.size(); }
};

// Memoized fiber graphs keyed by the exact fiber key. Readers share the lock;
// a racing second computation of the same key is discarded on insert.
class FiberCache {
 public:
  std::shared_ptr<const FiberGraph> find(const IntVector& key) const {
    std::shared_lock lock(mutex_);
    auto it = graphs_.find(key);
    return it == graphs_.end() ? nullptr : it->second;
  }

  std::shared_ptr<const FiberGraph> insert(const IntVector& key,
                                           std::shared_ptr<const FiberGraph> graph) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = graphs_.emplace(key, std::move(graph));
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return graphs_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    graphs_.clear();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<IntVector, std::shared_ptr<const FiberGraph>> graphs_;
};

class ConfigMatrix;
ConfigMatrix admit_matrix(const RawMatrix& raw);

// An admitted configuration matrix: no zero column, pointed kernel.
// Immutable apart from the attached fiber cache.
class ConfigMatrix {
 public:
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::int64_t at(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }
  RawMatrix to_rows() const {
    RawMatrix out(rows_, IntVector(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r][c] = at(r, c);
    return out;
  }

  const Grading& grading() const noexcept { return grading_; }

  // c . a_i for every column i; all >= 1.
  const IntVector& column_degrees() const noexcept { return column_degrees_; }

  IntVector apply(std::span<const std::int64_t> u) const {
    IntVector t(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::int64_t s = 0;
      for (std::size_t c = 0; c < cols_; ++c)
        if (u[c] != 0) s = checked_add(s, checked_mul(at(r, c), u[c]));
      t[r] = s;
    }
    return t;
  }

  bool in_kernel(std::span<const std::int64_t> z) const {
    auto t = apply(z);
    return std::all_of(t.begin(), t.end(), [](std::int64_t v) { return v == 0; });
  }

  // c . t for a fiber key t.
  std::int64_t degree_of_key(std::span<const std::int64_t> t) const {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < rows_; ++r)
      s = checked_add(s, checked_mul(grading_.c[r], t[r]));
    return s;
  }

  // c . (A u) computed through the column degrees.
  std::int64_t degree_of(std::span<const std::int64_t> u) const {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (u[c] != 0) s = checked_add(s, checked_mul(column_degrees_[c], u[c]));
    return s;
  }

  FiberCache& fiber_cache() const noexcept { return *cache_; }

  bool operator==(const ConfigMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  friend ConfigMatrix admit_matrix(const RawMatrix& raw);
  ConfigMatrix() = default;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  IntVector entries_;
  Grading grading_;
  IntVector column_degrees_;
  std::shared_ptr<FiberCache> cache_;
};

namespace detail {

// Phase-one simplex over Q with Bland's rule: finds x >= 0 with M x = b,
// or reports infeasibility. M is m x N, row-major.
inline std::optional<std::vector<BigRational>> find_nonnegative_solution(
    std::vector<std::vector<BigRational>> M, std::vector<BigRational> b) {
  const std::size_t m = M.size();
  const std::size_t N = m ? M[0].size() : 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) {
      for (auto& v : M[i]) v = -v;
      b[i] = -b[i];
    }
  }
  // Tableau columns: N structural, m artificial, then rhs.
  const std::size_t W = N + m;
  std::vector<std::vector<BigRational>> T(m, std::vector<BigRational>(W + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < N; ++j) T[i][j] = M[i][j];
    T[i][N + i] = 1;
    T[i][W] = b[i];
    basis[i] = N + i;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  std::vector<BigRational> cost(W + 1);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t i = 0; i < m; ++i) cost[j] -= T[i][j];
  for (std::size_t i = 0; i < m; ++i) cost[W] -= T[i][W];

  while (true) {
    std::size_t enter = W;
    for (std::size_t j = 0; j < W; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == W) break;
    std::size_t leave = m;
    BigRational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      BigRational ratio = T[i][W] / T[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen in phase one
    BigRational piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      BigRational f = T[i][enter];
      for (std::size_t j = 0; j <= W; ++j)
        if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
    }
    if (cost[enter] != 0) {
      BigRational f = cost[enter];
      for (std::size_t j = 0; j <= W; ++j)
        if (T[leave][j] != 0) cost[j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  if (cost[W] != 0) return std::nullopt;  // positive artificial sum
  std::vector<BigRational> x(N);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < N) x[basis[i]] = T[i][W];
  return x;
}

// Clears denominators and divides out the content.
inline std::vector<BigInt> primitive_integer_vector(const std::vector<BigRational>& x) {
  BigInt l = 1;
  for (const auto& v : x) l = boost::multiprecision::lcm(l, denominator(v));
  std::vector<BigInt> out(x.size());
  BigInt g = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = numerator(x[i]) * (l / denominator(x[i]));
    g = boost::multiprecision::gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& v : out) v /= g;
  return out;
}

}  // namespace detail

// Either a grading c with c . a_i >= 1 for every column, or a nonzero
// nonnegative kernel vector. Exactly one exists (Gordan's alternative).
using GradingResult = std::variant<Grading, IntVector>;

inline GradingResult positive_grading(const RawMatrix& A) {
  if (A.empty() || A[0].empty()) throw EmptyMatrixError();
  const std::size_t d = A.size(), n = A[0].size();
  for (const auto& row : A)
    if (row.size() != n) throw RaggedMatrixError();

  // A strictly positive row is its own grading.
  for (std::size_t r = 0; r < d; ++r) {
    if (std::all_of(A[r].begin(), A[r].end(), [](std::int64_t v) { return v > 0; })) {
      Grading g{IntVector(d, 0)};
      g.c[r] = 1;
      return g;
    }
  }

  // x >= 0, A x = 0, sum x = 1.
  {
    std::vector<std::vector<BigRational>> M(d + 1, std::vector<BigRational>(n));
    std::vector<BigRational> b(d + 1, 0);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t j = 0; j < n; ++j) M[r][j] = A[r][j];
    for (std::size_t j = 0; j < n; ++j) M[d][j] = 1;
    b[d] = 1;
    if (auto x = detail::find_nonnegative_solution(std::move(M), std::move(b))) {
      auto v = detail::primitive_integer_vector(*x);
      IntVector cert(n);
      for (std::size_t j = 0; j < n; ++j) cert[j] = to_int64(v[j]);
      return cert;
    }
  }

  // A^T (c+ - c-) - s = 1 with c+, c-, s >= 0.
  std::vector<std::vector<BigRational>> M(n, std::vector<BigRational>(2 * d + n));
  std::vector<BigRational> b(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < d; ++r) {
      M[j][r] = A[r][j];
      M[j][d + r] = -A[r][j];
    }
    M[j][2 * d + j] = -1;
  }
  auto sol = detail::find_nonnegative_solution(std::move(M), std::move(b));
  if (!sol) throw Error("grading LP infeasible although kernel is pointed");
  std::vector<BigRational> c(d);
  for (std::size_t r = 0; r < d; ++r) c[r] = (*sol)[r] - (*sol)[d + r];
  auto v = detail::primitive_integer_vector(c);
  Grading g{IntVector(d)};
  for (std::size_t r = 0; r < d; ++r) g.c[r] = to_int64(v[r]);
  return g;
}

inline ConfigMatrix admit_matrix(const RawMatrix& raw) {
  if (raw.empty() || raw[0].empty()) throw EmptyMatrixError();
  const std::size_t d = raw.size(), n = raw[0].size();
  for (const auto& row : raw)
    if (row.size() != n) throw RaggedMatrixError();
  for (std::size_t j = 0; j < n; ++j) {
    bool zero = true;
    for (std::size_t r = 0; r < d; ++r) zero = zero && raw[r][j] == 0;
    if (zero) throw ZeroColumnError(j);
  }
  auto res = positive_grading(raw);
  if (auto* cert = std::get_if<IntVector>(&res)) throw NotConfigurationError(*cert);

  ConfigMatrix A;
  A.rows_ = d;
  A.cols_ = n;
  A.entries_.reserve(d * n);
  for (const auto& row : raw) A.entries_.insert(A.entries_.end(), row.begin(), row.end());
  A.grading_ = std::get<Grading>(res);
  A.column_degrees_.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < d; ++r)
      s = checked_add(s, checked_mul(A.grading_.c[r], raw[r][j]));
    if (s < 1) throw Error("grading is not positive on column " + std::to_string(j + 1));
    A.column_degrees_[j] = s;
  }
  A.cache_ = std::make_shared<FiberCache>();
  return A;
}

// Column-style Hermite normal form of A with the unimodular transform
// tracked; the transform columns beyond the pivots span ker(A) over Z.
inline LatticeBasis kernel_lattice_basis(const RawMatrix& A) {
  if (A.empty() || A[0].empty()) throw EmptyMatrixError();
  const std::size_t d = A.size(), n = A[0].size();
  // Column-major working copies.
  std::vector<std::vector<BigInt>> H(n, std::vector<BigInt>(d));
  std::vector<std::vector<BigInt>> U(n, std::vector<BigInt>(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (A.size() != d || A[0].size() != n) throw RaggedMatrixError();
    for (std::size_t r = 0; r < d; ++r) H[j][r] = A[r][j];
    U[j][j] = 1;
  }
  auto axpy = [&](std::size_t dst, const BigInt& q, std::size_t src) {
    // col[dst] -= q * col[src]
    for (std::size_t r = 0; r < d; ++r) H[dst][r] -= q * H[src][r];
    for (std::size_t r = 0; r < n; ++r) U[dst][r] -= q * U[src][r];
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    std::swap(H[a], H[b]);
    std::swap(U[a], U[b]);
  };

  std::size_t pivot = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  for (std::size_t r = 0; r < d && pivot < n; ++r) {
    while (true) {
      std::size_t best = n;
      for (std::size_t j = pivot; j < n; ++j)
        if (H[j][r] != 0 && (best == n || abs(H[j][r]) < abs(H[best][r]))) best = j;
      if (best == n) break;
      swap_cols(pivot, best);
      bool done = true;
      for (std::size_t j = pivot + 1; j < n; ++j) {
        if (H[j][r] == 0) continue;
        BigInt q = H[j][r] / H[pivot][r];
        axpy(j, q, pivot);
        if (H[j][r] != 0) done = false;
      }
      if (done) break;
    }
    if (pivot < n && H[pivot][r] != 0) {
      if (H[pivot][r] < 0) {
        for (auto& v : H[pivot]) v = -v;
        for (auto& v : U[pivot]) v = -v;
      }
      // Reduce earlier columns into [0, pivot entry).
      for (std::size_t j = 0; j < pivot; ++j) {
        BigInt q = H[j][r] / H[pivot][r];
        if (H[j][r] - q * H[pivot][r] < 0) q -= 1;
        if (q != 0) axpy(j, q, pivot);
      }
      pivots.emplace_back(r, pivot);
      ++pivot;
    }
  }

  LatticeBasis basis;
  for (std::size_t j = pivot; j < n; ++j) {
    IntVector v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = to_int64(U[j][r]);
    basis.vectors.push_back(std::move(v));
  }
  return basis;
}

inline LatticeBasis kernel_lattice_basis(const ConfigMatrix& A) {
  return kernel_lattice_basis(A.to_rows());
}

}  // namespace toric
