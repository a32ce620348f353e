#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "chromacomm/errors.hpp"

namespace chromacomm {

// Exact nonnegative rational, used wherever a probability must be sampled
// bit-identically on both sides of a channel.  Doubles are avoided on that
// path so the sampled subsets cannot depend on floating-point quirks.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d = 1) : num(n), den(d) {
    check_config(d != 0, "Rational: zero denominator");
    reduce();
  }

  void reduce() {
    const std::uint64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// Parses "150", "3/20" or "0.15" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  check_config(!text.empty(), "parse_rational: empty string");
  auto digits_only = [](const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    check_config(digits_only(a) && digits_only(b), "parse_rational: bad fraction '" + text + "'");
    return Rational(std::stoull(a), std::stoull(b));
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string a = text.substr(0, dot), b = text.substr(dot + 1);
    check_config((a.empty() || digits_only(a)) && digits_only(b) && b.size() <= 18,
                 "parse_rational: bad decimal '" + text + "'");
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < b.size(); ++i) den *= 10;
    const std::uint64_t whole = a.empty() ? 0 : std::stoull(a);
    return Rational(whole * den + std::stoull(b), den);
  }
  check_config(digits_only(text), "parse_rational: bad integer '" + text + "'");
  return Rational(std::stoull(text));
}

// SplitMix64 (Steele, Lea, Flood; public-domain reference constants).
// Chosen as the project-wide generator because it is tiny, seedable, and its
// output is a fixed function of (seed, draw index) on every platform --
// protocol runs must replay bit-exactly across machines and transports.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One-shot mix of a 64-bit value; used for seed fingerprints in handshakes.
inline std::uint64_t mix64(std::uint64_t x) {
  return splitmix64_next(x);
}

// A seedable deterministic random stream.  Both parties of a session hold one
// with the same seed and consume draws in lockstep; every derived object
// (permutations, subsets, color draws) is therefore identical on both sides.
class SharedRandomStream {
 public:
  explicit SharedRandomStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }
  // Number of raw 64-bit draws consumed so far.
  std::uint64_t position() const { return draws_; }

  std::uint64_t next_u64() {
    ++draws_;
    return splitmix64_next(state_);
  }

  // Unbiased uniform value in {0, ..., range_size-1} via power-of-two
  // masking with rejection.  range_size == 1 consumes no entropy.
  std::uint64_t uniform(std::uint64_t range_size) {
    check_config(range_size >= 1, "uniform: empty range");
    if (range_size == 1) return 0;
    const int bits = std::bit_width(range_size - 1);
    const std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
      const std::uint64_t x = next_u64() & mask;
      if (x < range_size) return x;
    }
  }

  // Bernoulli(p) for exact rational p; p in {0, 1} consumes no entropy.
  bool bernoulli(const Rational& p) {
    check_config(p.num <= p.den, "bernoulli: probability > 1");
    if (p.is_zero()) return false;
    if (p.is_one()) return true;
    return uniform(p.den) < p.num;
  }

  // Fisher-Yates shuffle of (1, ..., n); result[i] is the vertex visited at
  // position i.
  std::vector<int> permutation(int n) {
    check_config(n >= 0, "permutation: negative size");
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    for (int i = n - 1; i >= 1; --i) {
      const auto j = static_cast<std::size_t>(uniform(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[j]);
    }
    return order;
  }

  // Independent Bernoulli(p) subset of {1, ..., m}, ascending.
  std::vector<int> subset(int m, const Rational& p) {
    check_config(m >= 0, "subset: negative universe");
    std::vector<int> out;
    for (int e = 1; e <= m; ++e)
      if (bernoulli(p)) out.push_back(e);
    return out;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

}  // namespace chromacomm
