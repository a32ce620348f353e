#pragma once

#include <atomic>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chromacomm/channel.hpp"
#include "chromacomm/errors.hpp"
#include "chromacomm/prng.hpp"

namespace chromacomm::slackint {

// Problem instance: X, Y are proper subsets of {1..m} promised to satisfy
// |X| + |Y| <= m - k for some slack k >= 1 (overlap allowed), and the goal is
// to agree on an element outside X union Y.
struct SlackIntInstance {
  int m = 0;
  std::vector<int> x_set;
  std::vector<int> y_set;
  int k = 1;

  std::string to_string() const {
    auto csv = [](const std::vector<int>& xs) {
      std::string s;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(xs[i]);
      }
      return s;
    };
    return std::to_string(m) + " | " + csv(x_set) + " | " + csv(y_set);
  }
};

// Membership mask over 1..m (index 0 unused); each party's set is private.
using ElementMask = std::vector<std::uint8_t>;

inline ElementMask make_mask(int m, const std::vector<int>& elems) {
  ElementMask mask(static_cast<std::size_t>(m) + 1, 0);
  for (int e : elems) {
    check_config(1 <= e && e <= m, "make_mask: element outside universe");
    mask[static_cast<std::size_t>(e)] = 1;
  }
  return mask;
}

inline std::uint64_t count_in(const ElementMask& mask, std::span<const int> elems) {
  std::uint64_t c = 0;
  for (int e : elems) c += mask[static_cast<std::size_t>(e)];
  return c;
}

// Reference solver used by tests and post-checks: the smallest element of
// {1..m} outside X union Y.
inline int brute_force_oracle(const SlackIntInstance& inst) {
  const auto x = make_mask(inst.m, inst.x_set);
  const auto y = make_mask(inst.m, inst.y_set);
  for (int e = 1; e <= inst.m; ++e)
    if (!x[static_cast<std::size_t>(e)] && !y[static_cast<std::size_t>(e)]) return e;
  throw config_error("brute_force_oracle: X union Y covers the whole universe");
}

// Per-element sampling probability for a slack guess: min(c_sample*m/kg^2, 1).
inline Rational sample_probability(int m, int k_guess, const Rational& c_sample = Rational(150)) {
  check_config(m >= 1 && k_guess >= 1 && k_guess <= m, "sample_probability: bad parameters");
  const unsigned __int128 num =
      static_cast<unsigned __int128>(c_sample.num) * static_cast<unsigned __int128>(m);
  const unsigned __int128 den = static_cast<unsigned __int128>(c_sample.den) *
                                static_cast<unsigned __int128>(k_guess) *
                                static_cast<unsigned __int128>(k_guess);
  if (num >= den) return Rational(1);
  check_config(num <= ~0ULL && den <= ~0ULL, "sample_probability: parameters overflow");
  return Rational(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den));
}

// Instrumentation: number of binary searches whose bit-cost bound was
// checked.  The bound check itself throws on violation, so a nonzero counter
// together with no exception is evidence the inequality held throughout.
inline std::atomic<std::uint64_t> bound_checks_performed{0};

// Two-party test for "the sampled set S contains an element outside X u Y":
// Alice announces |S n X|, Bob answers one verdict bit |S n X| + |S n Y| < |S|.
// An empty S is false at zero cost.
inline bool slack_test(Session& session, std::span<const int> sample,
                       const PerParty<ElementMask>& sets) {
  if (sample.empty()) return false;
  const int count_width = payload_width(sample.size());
  const std::uint64_t count_a = session.exchange(
      Party::alice, "st/count", count_width,
      [&] { return count_in(sets.at(Party::alice), sample); });
  const std::uint64_t verdict = session.exchange(Party::bob, "st/verdict", 1, [&] {
    return count_a + count_in(sets.at(Party::bob), sample) < sample.size() ? 1ULL : 0ULL;
  });
  return verdict == 1;
}

// Deterministic two-party search over a universe promised to contain an
// element outside X u Y.  Each level announces both parties' counts inside
// the first ceil(s/2) elements and recurses into a half that still has
// slack, preferring the left half on ties, until one element remains.
//
// Bit cost is checked inline on every invocation against the closed-form
// worst case 2 * ceil(log2(s+1)) * ceil(log2(s)) for the starting size s.
inline int binary_search_protocol(Session& session, std::span<const int> universe,
                                  const PerParty<ElementMask>& sets) {
  check_config(!universe.empty(), "binary_search_protocol: empty universe");
  const std::uint64_t bits_before = session.total_bits();
  const std::uint64_t s0 = universe.size();
  std::span<const int> current = universe;
  while (current.size() > 1) {
    const std::size_t half = (current.size() + 1) / 2;
    const auto left = current.first(half);
    const int width = payload_width(half);
    const std::uint64_t count_a = session.exchange(
        Party::alice, "bs/a", width, [&] { return count_in(sets.at(Party::alice), left); });
    const std::uint64_t count_b = session.exchange(
        Party::bob, "bs/b", width, [&] { return count_in(sets.at(Party::bob), left); });
    current = (count_a + count_b < half) ? left : current.subspan(half);
  }
  const int element = current[0];

  const std::uint64_t used = session.total_bits() - bits_before;
  const std::uint64_t ceil_log = (s0 <= 1) ? 0 : static_cast<std::uint64_t>(std::bit_width(s0 - 1));
  const std::uint64_t bound = 2 * static_cast<std::uint64_t>(payload_width(s0)) * ceil_log;
  check_protocol(used <= bound, "binary_search_protocol: bit cost exceeded its worst-case bound");
  bound_checks_performed.fetch_add(1, std::memory_order_relaxed);

  for (Party p : {Party::alice, Party::bob})
    if (session.has_state_for(p))
      check_protocol(!sets.at(p)[static_cast<std::size_t>(element)],
                     "binary_search_protocol: result lies inside a party's set "
                     "(slack promise violated by the caller)");
  return element;
}

// Zero-error randomized protocol for the full universe {1..m}.  Slack guesses
// halve from m down to 1; each guess draws a shared Bernoulli sample S with
// probability sample_probability(m, guess), tests it, and on success finishes
// with a binary search inside S.  The guess sequence has ceil(log2 m) + 1
// entries; the final guess forces p = 1 whenever c_sample >= 1, so the
// full-universe test passes by the slack promise and the protocol never errs.
// (For sub-unit c_sample a closing full-universe search keeps it zero-error.)
inline int sampled_slack_protocol(Session& session, int m, const PerParty<ElementMask>& sets,
                                  const Rational& c_sample = Rational(150)) {
  check_config(m >= 1, "sampled_slack_protocol: empty universe");
  const std::uint64_t bits_before = session.total_bits();

  int element = 0;
  std::uint64_t guesses = 0;
  for (int guess = m;; guess = (guess + 1) / 2) {
    ++guesses;
    const Rational p = sample_probability(m, guess, c_sample);
    const std::vector<int> sample = session.shared_subset(m, p);
    if (slack_test(session, sample, sets)) {
      element = binary_search_protocol(session, sample, sets);
      break;
    }
    if (guess == 1) break;
  }
  if (element == 0) {
    // Reachable only when c_sample < 1/m kept the final guess below p = 1.
    std::vector<int> full(static_cast<std::size_t>(m));
    std::iota(full.begin(), full.end(), 1);
    element = binary_search_protocol(session, full, sets);
  }

  // Worst case: every guess pays a full-universe test, plus one search.
  const std::uint64_t max_guesses =
      (m == 1) ? 1 : static_cast<std::uint64_t>(std::bit_width(static_cast<std::uint64_t>(m) - 1)) + 1;
  const std::uint64_t test_max = static_cast<std::uint64_t>(payload_width(static_cast<std::uint64_t>(m))) + 1;
  const std::uint64_t search_max =
      2 * static_cast<std::uint64_t>(payload_width(static_cast<std::uint64_t>(m))) *
      ((m == 1) ? 0 : static_cast<std::uint64_t>(std::bit_width(static_cast<std::uint64_t>(m) - 1)));
  const std::uint64_t used = session.total_bits() - bits_before;
  check_protocol(guesses <= max_guesses, "sampled_slack_protocol: too many guesses");
  check_protocol(used <= (max_guesses + 1) * (test_max + search_max),
                 "sampled_slack_protocol: bit cost exceeded its worst-case bound");

  for (Party p : {Party::alice, Party::bob})
    if (session.has_state_for(p))
      check_protocol(!sets.at(p)[static_cast<std::size_t>(element)],
                     "sampled_slack_protocol: result lies inside a party's set");
  return element;
}

// Conveniences for tests and single-process callers.

inline int binary_search_protocol(Session& session, const std::vector<int>& universe,
                                  const std::vector<int>& x_set, const std::vector<int>& y_set) {
  int top = 0;
  for (int e : universe) top = std::max(top, e);
  PerParty<ElementMask> sets;
  sets.emplace(Party::alice, make_mask(top, x_set));
  sets.emplace(Party::bob, make_mask(top, y_set));
  return binary_search_protocol(session, std::span<const int>(universe), sets);
}

inline bool slack_test(Session& session, const std::vector<int>& sample,
                       const std::vector<int>& x_set, const std::vector<int>& y_set) {
  int top = 0;
  for (int e : sample) top = std::max(top, e);
  for (int e : x_set) top = std::max(top, e);
  for (int e : y_set) top = std::max(top, e);
  PerParty<ElementMask> sets;
  sets.emplace(Party::alice, make_mask(top, x_set));
  sets.emplace(Party::bob, make_mask(top, y_set));
  return slack_test(session, std::span<const int>(sample), sets);
}

inline int sampled_slack_protocol(Session& session, const SlackIntInstance& inst,
                                  const Rational& c_sample = Rational(150)) {
  PerParty<ElementMask> sets;
  sets.emplace(Party::alice, make_mask(inst.m, inst.x_set));
  sets.emplace(Party::bob, make_mask(inst.m, inst.y_set));
  return sampled_slack_protocol(session, inst.m, sets, c_sample);
}

}  // namespace chromacomm::slackint
