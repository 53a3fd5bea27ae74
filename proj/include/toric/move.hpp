#pragma once

#include "toric/exactla.hpp"

#include <compare>
#include <span>
#include <tuple>

namespace toric {

class MovesNotInKernelError : public Error {
 public:
  explicit MovesNotInKernelError(const IntVector& z)
      : Error("move (" + to_string(z) + ") is not in the kernel of the matrix"), move_(z) {}
  const IntVector& move() const noexcept { return move_; }

 private:
  IntVector move_;
};

inline IntVector positive_part(std::span<const std::int64_t> z) {
  IntVector p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = z[i] > 0 ? z[i] : 0;
  return p;
}

inline IntVector negative_part(std::span<const std::int64_t> z) {
  IntVector p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = z[i] < 0 ? -z[i] : 0;
  return p;
}

// Flips z so that its first nonzero entry is positive.
inline IntVector canonical_sign(IntVector z) {
  for (auto v : z) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& w : z) w = -w;
    break;
  }
  return z;
}

// A nonzero kernel vector z, read as the binomial x^{z+} - x^{z-}.
// Stored with canonical sign; fiber_key is A z+ and degree is c . fiber_key.
struct Move {
  IntVector vector;
  IntVector fiber_key;
  std::int64_t degree = 0;

  static Move from_vector(const ConfigMatrix& A, IntVector z) {
    if (z.size() != A.cols()) throw Error("move length does not match matrix columns");
    if (std::all_of(z.begin(), z.end(), [](std::int64_t v) { return v == 0; }))
      throw Error("zero vector is not a move");
    if (!A.in_kernel(z)) throw MovesNotInKernelError(z);
    Move m;
    m.vector = canonical_sign(std::move(z));
    auto plus = positive_part(m.vector);
    m.fiber_key = A.apply(plus);
    m.degree = A.degree_of(plus);
    return m;
  }

  // The move joining two elements of one fiber.
  static Move between(const ConfigMatrix& A, std::span<const std::int64_t> u,
                      std::span<const std::int64_t> v) {
    IntVector z(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) z[i] = checked_add(u[i], -v[i]);
    return from_vector(A, std::move(z));
  }

  IntVector plus() const { return positive_part(vector); }
  IntVector minus() const { return negative_part(vector); }

  // Canonical order: by degree, then fiber key, then vector.
  auto operator<=>(const Move& o) const {
    return std::tie(degree, fiber_key, vector) <=> std::tie(o.degree, o.fiber_key, o.vector);
  }
  bool operator==(const Move& o) const { return vector == o.vector; }
};

}  // namespace toric
