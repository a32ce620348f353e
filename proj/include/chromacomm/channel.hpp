#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chromacomm/errors.hpp"
#include "chromacomm/party.hpp"
#include "chromacomm/prng.hpp"

namespace chromacomm {

// Non-owning callable view; lets a session defer computing a message value to
// the party that actually owns the private state, without heap allocation.
template <class Sig>
class function_ref;

template <class R, class... Args>
class function_ref<R(Args...)> {
 public:
  template <class F>
  function_ref(F&& f)  // NOLINT(google-explicit-constructor)
      : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
        call_([](void* obj, Args... args) -> R {
          return (*static_cast<std::remove_reference_t<F>*>(obj))(std::forward<Args>(args)...);
        }) {}

  R operator()(Args... args) const { return call_(obj_, std::forward<Args>(args)...); }

 private:
  void* obj_;
  R (*call_)(void*, Args...);
};

// Width in bits of an integer known to lie in {0, ..., bound}: the number of
// values is bound+1, so this is ceil(log2(bound+1)).
inline int payload_width(std::uint64_t bound) {
  return std::bit_width(bound);
}

// One transmitted integer.  Only the payload width counts toward the bit
// cost; labels and framing are bookkeeping.
struct Message {
  Party sender = Party::alice;
  std::string label;
  std::uint64_t value = 0;
  int width = 0;
};

// Ordered log of every message in a session, with total payload bits and the
// number of speaker alternations (rounds).
class Transcript {
 public:
  void append(Party sender, std::string_view label, std::uint64_t value, int width) {
    if (messages_.empty() || messages_.back().sender != sender) ++rounds_;
    messages_.push_back(Message{sender, std::string(label), value, width});
    total_bits_ += static_cast<std::uint64_t>(width);
  }

  std::size_t size() const { return messages_.size(); }
  const Message& operator[](std::size_t i) const { return messages_[i]; }
  const std::vector<Message>& messages() const { return messages_; }
  std::uint64_t total_bits() const { return total_bits_; }
  int rounds() const { return rounds_; }

  // Payload bits of all messages whose label starts with the given prefix;
  // used for per-phase cost breakdowns.
  std::uint64_t bits_with_prefix(std::string_view prefix) const {
    std::uint64_t bits = 0;
    for (const auto& msg : messages_)
      if (msg.label.size() >= prefix.size() &&
          std::string_view(msg.label).substr(0, prefix.size()) == prefix)
        bits += static_cast<std::uint64_t>(msg.width);
    return bits;
  }

  friend bool operator==(const Transcript& a, const Transcript& b) {
    if (a.total_bits_ != b.total_bits_ || a.messages_.size() != b.messages_.size()) return false;
    for (std::size_t i = 0; i < a.messages_.size(); ++i) {
      const auto& x = a.messages_[i];
      const auto& y = b.messages_[i];
      if (x.sender != y.sender || x.label != y.label || x.value != y.value || x.width != y.width)
        return false;
    }
    return true;
  }

 private:
  std::vector<Message> messages_;
  std::uint64_t total_bits_ = 0;
  int rounds_ = 0;
};

// Holder for per-party private protocol state.  An in-memory session
// materializes both slots; a socket endpoint only its own.  Touching an
// absent slot is a hard error -- it would mean protocol code reached across
// the channel for state it cannot have.
template <class T>
class PerParty {
 public:
  template <class... Args>
  T& emplace(Party p, Args&&... args) {
    return slots_[index(p)].emplace(std::forward<Args>(args)...);
  }

  bool has(Party p) const { return slots_[index(p)].has_value(); }

  T& at(Party p) {
    check_protocol(has(p), "PerParty: accessing a party's state on the wrong endpoint");
    return *slots_[index(p)];
  }

  const T& at(Party p) const {
    check_protocol(has(p), "PerParty: accessing a party's state on the wrong endpoint");
    return *slots_[index(p)];
  }

 private:
  static std::size_t index(Party p) { return static_cast<std::size_t>(p); }
  std::optional<T> slots_[2];
};

// A two-party session: message exchange plus a shared randomness stream that
// both endpoints consume in lockstep.  Protocol code is written once against
// this interface and runs unchanged in-memory or over a socket.
class Session {
 public:
  virtual ~Session() = default;

  // True if this endpoint holds p's private state (both in-memory).
  virtual bool has_state_for(Party p) const = 0;

  // Transmits a width-bit integer from `sender`.  `produce` is evaluated only
  // on the endpoint that owns the sender's state; every endpoint returns the
  // transmitted value.  Values must fit the declared width.
  std::uint64_t exchange(Party sender, std::string_view label, int width,
                         function_ref<std::uint64_t()> produce) {
    check_config(width >= 1 && width <= 64, "exchange: width must be in 1..64");
    const std::uint64_t value = do_exchange(sender, label, width, produce);
    check_protocol(width == 64 || value < (1ULL << width),
                   "exchange: value does not fit declared width");
    transcript_.append(sender, label, value, width);
    return value;
  }

  // Convenience for callers that already hold the value on this endpoint.
  std::uint64_t send_uint(Party sender, std::string_view label, std::uint64_t value, int width) {
    return exchange(sender, label, width, [&] { return value; });
  }

  // Shared draws cost zero transcript bits and are identical on both sides.
  std::uint64_t shared_uniform(std::uint64_t range_size) {
    check_config(range_size >= 1, "shared_uniform: empty range");
    if (range_size == 1) return 0;
    const int bits = std::bit_width(range_size - 1);
    const std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
      const std::uint64_t x = draw_u64() & mask;
      if (x < range_size) return x;
    }
  }

  bool shared_bernoulli(const Rational& p) {
    check_config(p.num <= p.den, "shared_bernoulli: probability > 1");
    if (p.is_zero()) return false;
    if (p.is_one()) return true;
    return shared_uniform(p.den) < p.num;
  }

  std::vector<int> shared_permutation(int n) {
    check_config(n >= 0, "shared_permutation: negative size");
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    for (int i = n - 1; i >= 1; --i) {
      const auto j = static_cast<std::size_t>(shared_uniform(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[j]);
    }
    return order;
  }

  std::vector<int> shared_subset(int m, const Rational& p) {
    check_config(m >= 0, "shared_subset: negative universe");
    std::vector<int> out;
    for (int e = 1; e <= m; ++e)
      if (shared_bernoulli(p)) out.push_back(e);
    return out;
  }

  const Transcript& transcript() const { return transcript_; }
  std::uint64_t total_bits() const { return transcript_.total_bits(); }

 protected:
  virtual std::uint64_t do_exchange(Party sender, std::string_view label, int width,
                                    function_ref<std::uint64_t()> produce) = 0;
  virtual std::uint64_t draw_u64() = 0;

  Transcript transcript_;
};

// Single-process simulator.  Both parties' states live here; to realize the
// shared-randomness contract it keeps one stream per party seeded alike,
// advances them in lockstep, and asserts every draw coincides.
class MemorySession : public Session {
 public:
  explicit MemorySession(std::uint64_t shared_seed)
      : streams_{SharedRandomStream(shared_seed), SharedRandomStream(shared_seed)} {}

  bool has_state_for(Party) const override { return true; }

  std::uint64_t stream_position() const { return streams_[0].position(); }

 protected:
  std::uint64_t do_exchange(Party, std::string_view, int, function_ref<std::uint64_t()> produce)
      override {
    return produce();
  }

  std::uint64_t draw_u64() override {
    const std::uint64_t a = streams_[0].next_u64();
    const std::uint64_t b = streams_[1].next_u64();
    check_protocol(a == b, "shared randomness diverged between parties");
    return a;
  }

 private:
  SharedRandomStream streams_[2];
};

}  // namespace chromacomm
