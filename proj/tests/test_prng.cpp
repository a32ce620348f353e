#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "chromacomm/prng.hpp"

using namespace chromacomm;

// Reference outputs computed with an independent implementation of the
// published SplitMix64 algorithm (same constants as Vigna's splitmix64.c).
TEST_CASE("splitmix64 matches published reference vectors") {
  {
    std::uint64_t s = 0;
    CHECK(splitmix64_next(s) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64_next(s) == 0x6e789e6aa1b965f4ULL);
    CHECK(splitmix64_next(s) == 0x06c45d188009454fULL);
    CHECK(splitmix64_next(s) == 0xf88bb8a8724c81ecULL);
  }
  {
    std::uint64_t s = 1;
    CHECK(splitmix64_next(s) == 0x910a2dec89025cc1ULL);
    CHECK(splitmix64_next(s) == 0xbeeb8da1658eec67ULL);
  }
  {
    std::uint64_t s = 0xDEADBEEFULL;
    CHECK(splitmix64_next(s) == 0x4adfb90f68c9eb9bULL);
    CHECK(splitmix64_next(s) == 0xde586a3141a10922ULL);
  }
}

TEST_CASE("rational arithmetic and parsing") {
  CHECK(parse_rational("150") == Rational(150));
  CHECK(parse_rational("3/20") == Rational(3, 20));
  CHECK(parse_rational("0.15") == Rational(3, 20));
  CHECK(Rational(38400, 51076) == Rational(9600, 12769));  // reduces by gcd 4
  CHECK(Rational(6, 4).to_string() == "3/2");
  CHECK(Rational(150).to_string() == "150");
  CHECK(Rational(1) == Rational(7, 7));
  CHECK(Rational(0, 5).is_zero());
  CHECK(Rational(5, 5).is_one());
  CHECK(Rational(1, 2).to_double() == 0.5);
  CHECK_THROWS_AS(parse_rational("abc"), config_error);
  CHECK_THROWS_AS(Rational(1, 0), config_error);
}

TEST_CASE("equal seeds give identical draw sequences") {
  SharedRandomStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.position() == b.position());
  CHECK(a.position() == 100);
}

TEST_CASE("uniform on a singleton range is free and zero") {
  SharedRandomStream s(7);
  CHECK(s.uniform(1) == 0);
  CHECK(s.position() == 0);  // no entropy consumed
}

TEST_CASE("uniform draws are unbiased: chi-square style check, range 6") {
  SharedRandomStream s(123);
  std::vector<int> freq(6, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++freq[s.uniform(6)];
  // Each bucket ~ Binomial(60000, 1/6): mean 10000, sigma = sqrt(60000*(1/6)*(5/6)) ~ 91.3.
  const double sigma = std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
  for (int v = 0; v < 6; ++v) CHECK(std::abs(freq[v] - 10000.0) <= 5.0 * sigma);
}

TEST_CASE("bernoulli with trivial probabilities consumes no entropy") {
  SharedRandomStream s(9);
  CHECK(s.bernoulli(Rational(1)) == true);
  CHECK(s.bernoulli(Rational(0, 3)) == false);
  CHECK(s.position() == 0);
  // Nontrivial p draws exactly once.
  (void)s.bernoulli(Rational(1, 2));
  CHECK(s.position() >= 1);
}

TEST_CASE("bernoulli frequency matches its probability") {
  SharedRandomStream s(321);
  int hits = 0;
  const int draws = 40000;
  const Rational p(3, 20);  // 0.15
  for (int i = 0; i < draws; ++i) hits += s.bernoulli(p) ? 1 : 0;
  const double sigma = std::sqrt(draws * 0.15 * 0.85);
  CHECK(std::abs(hits - draws * 0.15) <= 5.0 * sigma);
}

TEST_CASE("permutations are uniform over S_3") {
  SharedRandomStream s(55);
  std::map<std::vector<int>, int> freq;
  const int draws = 6000;
  for (int i = 0; i < draws; ++i) ++freq[s.permutation(3)];
  REQUIRE(freq.size() == 6);
  const double sigma = std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
  for (const auto& [perm, count] : freq) CHECK(std::abs(count - 1000.0) <= 5.0 * sigma);
}

TEST_CASE("permutation basics") {
  SharedRandomStream s(1);
  CHECK(s.permutation(1) == std::vector<int>{1});
  SharedRandomStream a(10), b(10);
  CHECK(a.permutation(50) == b.permutation(50));  // reproducible
  auto p = a.permutation(20);
  std::vector<char> seen(21, 0);
  for (int v : p) {
    REQUIRE((v >= 1 && v <= 20));
    CHECK(!seen[v]);
    seen[v] = 1;
  }
}

TEST_CASE("subset sampling hits its expected size") {
  SharedRandomStream s(77);
  CHECK(s.subset(10, Rational(1)) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(s.subset(10, Rational(0, 1)).empty());
  // m=1000, p=0.15: mean |S| over 200 draws near 150.
  const int reps = 200;
  double total = 0;
  for (int i = 0; i < reps; ++i) total += static_cast<double>(s.subset(1000, Rational(3, 20)).size());
  const double mean = total / reps;
  const double sigma_mean = std::sqrt(1000 * 0.15 * 0.85 / reps);
  CHECK(std::abs(mean - 150.0) <= 5.0 * sigma_mean);
  // Elements come back sorted and in range.
  auto sub = s.subset(100, Rational(1, 3));
  for (std::size_t i = 0; i + 1 < sub.size(); ++i) CHECK(sub[i] < sub[i + 1]);
  for (int e : sub) CHECK((e >= 1 && e <= 100));
}

TEST_CASE("uniform covers full range without bias at power-of-two and odd sizes") {
  SharedRandomStream s(31);
  for (std::uint64_t range : {2ull, 3ull, 5ull, 8ull, 17ull}) {
    std::vector<int> freq(range, 0);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) ++freq[s.uniform(range)];
    const double expect = static_cast<double>(draws) / static_cast<double>(range);
    const double p = 1.0 / static_cast<double>(range);
    const double sigma = std::sqrt(draws * p * (1 - p));
    for (std::uint64_t v = 0; v < range; ++v) CHECK(std::abs(freq[v] - expect) <= 5.0 * sigma);
  }
}
