#include "pufauth/common.hpp"

#include <algorithm>

namespace pufauth {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw Error("invalid hex digit");
}

thread_local OpCounters* t_active_counters = nullptr;

}  // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(hex_nibble(hex[2 * i]) << 4 | hex_nibble(hex[2 * i + 1]));
  return out;
}

std::string Value256::hex() const { return to_hex(bytes); }

Value256 Value256::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw Error("Value256 hex must be 64 chars");
  auto raw = pufauth::from_hex(hex);
  Value256 v;
  std::copy(raw.begin(), raw.end(), v.bytes.begin());
  return v;
}

Value256 operator^(const Value256& a, const Value256& b) {
  if (auto* c = CounterScope::active()) ++c->xor_ops;
  Value256 out;
  for (std::size_t i = 0; i < out.bytes.size(); ++i) out.bytes[i] = a.bytes[i] ^ b.bytes[i];
  return out;
}

BitString BitString::from_string(std::string_view zeros_and_ones) {
  std::vector<std::uint8_t> bits;
  bits.reserve(zeros_and_ones.size());
  for (char c : zeros_and_ones) {
    if (c != '0' && c != '1') throw Error("bit string literal must be 0/1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

BitString BitString::xored(const BitString& other) const {
  if (size() != other.size()) throw Error("bit string width mismatch");
  BitString out(size());
  for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] ^ other.bits_[i];
  return out;
}

std::size_t BitString::hamming_distance(const BitString& other) const {
  if (size() != other.size()) throw Error("bit string width mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < size(); ++i) d += bits_[i] != other.bits_[i];
  return d;
}

std::vector<std::uint8_t> BitString::packed() const {
  std::vector<std::uint8_t> out((size() + 7) / 8, 0);
  for (std::size_t i = 0; i < size(); ++i)
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

std::string BitString::to_string() const {
  std::string s(size(), '0');
  for (std::size_t i = 0; i < size(); ++i) s[i] = bits_[i] ? '1' : '0';
  return s;
}

Value256 Rng::value256() {
  Value256 v;
  for (int w = 0; w < 4; ++w) {
    std::uint64_t x = next_u64();
    for (int i = 0; i < 8; ++i)
      v.bytes[static_cast<std::size_t>(w * 8 + i)] = static_cast<std::uint8_t>(x >> (56 - 8 * i));
  }
  return v;
}

BitString Rng::bits(std::size_t n) {
  BitString out(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = next_u64();
    out.set(i, static_cast<std::uint8_t>((word >> (i % 64)) & 1));
  }
  return out;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw Error("Rng::index: empty range");
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

CounterScope::CounterScope(OpCounters& c) : prev_(t_active_counters) { t_active_counters = &c; }

CounterScope::~CounterScope() { t_active_counters = prev_; }

OpCounters* CounterScope::active() { return t_active_counters; }

}  // namespace pufauth
