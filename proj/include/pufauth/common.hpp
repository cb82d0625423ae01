#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pufauth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width 256-bit opaque value. Identities, keys, nonces, challenges,
/// responses and digests all share this shape; equality is bitwise.
struct Value256 {
  std::array<std::uint8_t, 32> bytes{};

  friend auto operator<=>(const Value256&, const Value256&) = default;
  friend bool operator==(const Value256&, const Value256&) = default;

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  std::string hex() const;
  static Value256 from_hex(std::string_view hex);
};

Value256 operator^(const Value256& a, const Value256& b);

struct Value256Hasher {
  std::size_t operator()(const Value256& v) const {
    // digests are uniform, the first word is hash enough
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | v.bytes[i];
    return h;
  }
};

/// Simulated-clock milliseconds. Monotone within one run.
struct Timestamp {
  std::uint64_t millis = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

inline std::uint64_t abs_diff(Timestamp a, Timestamp b) {
  return a.millis >= b.millis ? a.millis - b.millis : b.millis - a.millis;
}

/// Bit string with explicit length; used for biometrics and the fuzzy
/// extractor's extraction/helper strings.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n) : bits_(n, 0) {}
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b &= 1;
  }
  static BitString from_string(std::string_view zeros_and_ones);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t at(std::size_t i) const { return bits_.at(i); }
  void set(std::size_t i, std::uint8_t v) { bits_.at(i) = v & 1; }
  void flip(std::size_t i) { bits_.at(i) ^= 1; }

  BitString xored(const BitString& other) const;
  std::size_t hamming_distance(const BitString& other) const;

  /// MSB-first packing; the final partial byte is zero-padded.
  std::vector<std::uint8_t> packed() const;
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;  // one byte per bit, values 0/1
};

/// Deterministic, seedable generator. All protocol randomness flows through
/// one instance owned by the simulation loop so traces replay bit-exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  Value256 value256();
  BitString bits(std::size_t n);

  /// Uniform in [0, n). Rejection-sampled; never uses
  /// std::uniform_int_distribution (implementation-defined sequences).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 eng_;
};

/// Simulated wall clock, owned by the simulation loop.
class SimClock {
 public:
  Timestamp now() const { return {now_ms_}; }
  void advance(std::uint64_t ms) { now_ms_ += ms; }
  void advance_to(std::uint64_t ms) {
    if (ms > now_ms_) now_ms_ = ms;
  }

 private:
  std::uint64_t now_ms_ = 0;
};

/// Per-scenario operation counters (hash / xor / puf). Scoped via
/// CounterScope; matrix cells run in parallel, so the active counter is
/// thread-local rather than global.
struct OpCounters {
  std::uint64_t hash = 0;
  std::uint64_t xor_ops = 0;
  std::uint64_t puf = 0;
};

class CounterScope {
 public:
  explicit CounterScope(OpCounters& c);
  ~CounterScope();
  CounterScope(const CounterScope&) = delete;
  CounterScope& operator=(const CounterScope&) = delete;

  static OpCounters* active();

 private:
  OpCounters* prev_;
};

std::string to_hex(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace pufauth
