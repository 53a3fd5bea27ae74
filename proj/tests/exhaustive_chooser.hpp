#pragma once

#include "oracles.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

// Plays every decision path of the sampler and records each basis's exact
// probability.
class ExhaustiveChooser {
 public:
  std::size_t weighted(std::span<const std::uint64_t> w) {
    std::uint64_t total = 0;
    for (auto x : w) total += x;
    auto i = pick(w.size());
    prob_ *= oracle::Rational(w[i], total);
    return i;
  }
  std::size_t uniform(std::size_t n) {
    auto i = pick(n);
    prob_ *= oracle::Rational(1, n);
    return i;
  }
  // Moves to the next path; false once every path was played.
  bool next_path() {
    while (!path_.empty() && path_.back().first + 1 == path_.back().second) path_.pop_back();
    if (path_.empty()) return false;
    ++path_.back().first;
    depth_ = 0;
    prob_ = 1;
    return true;
  }
  const oracle::Rational& probability() const { return prob_; }

 private:
  std::size_t pick(std::size_t n) {
    if (depth_ == path_.size()) path_.emplace_back(0, n);
    return path_[depth_++].first;
  }
  std::vector<std::pair<std::size_t, std::size_t>> path_;
  std::size_t depth_ = 0;
  oracle::Rational prob_ = 1;
};

}  // namespace oracle
