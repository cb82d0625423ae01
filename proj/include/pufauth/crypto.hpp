#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "pufauth/common.hpp"

namespace pufauth {

/// SHA-256 of a raw byte sequence.
Value256 sha256(std::span<const std::uint8_t> data);
Value256 sha256(std::string_view data);

/// Multi-operand hash h(a||b||...) with unambiguous framing: every operand
/// is preceded by its byte length as a 4-byte big-endian integer, so
/// h("ab"||"c") != h("a"||"bc"). One digest() call counts as one hash
/// evaluation regardless of operand count.
class HashInput {
 public:
  HashInput& add(std::span<const std::uint8_t> bytes);
  HashInput& add(const Value256& v) { return add(std::span(v.bytes)); }
  HashInput& add(const BitString& b);
  HashInput& add(Timestamp ts);
  HashInput& add(std::string_view s);

  Value256 digest() const;

 private:
  std::vector<std::uint8_t> buf_;
};

/// Simulated PUF: a keyed hash over the device secret. Noiseless and pure;
/// the device secret never appears on any channel.
class PufDevice {
 public:
  explicit PufDevice(Value256 device_secret) : secret_(device_secret) {}

  Value256 eval(const Value256& challenge) const;

 private:
  Value256 secret_;
};

/// Repetition-code fuzzy extractor parameters: k secret bits, each repeated
/// r times (r odd), correcting t = (r-1)/2 flips per block.
struct FuzzyParams {
  std::uint32_t k = 32;
  std::uint32_t r = 5;

  FuzzyParams() = default;
  FuzzyParams(std::uint32_t k_, std::uint32_t r_) : k(k_), r(r_) { validate(); }

  void validate() const {
    if (k < 1) throw Error("fuzzy params: k must be >= 1");
    if (r < 3 || r % 2 == 0) throw Error("fuzzy params: r must be odd and >= 3");
  }

  std::uint32_t t() const { return (r - 1) / 2; }
  std::size_t biometric_len() const { return std::size_t{k} * r; }
};

/// Code-offset sketch: s1 is the extracted secret (k bits), s2 the public
/// helper string (k*r bits). s2 alone reveals s1 only together with a
/// biometric close to the enrolled one.
struct FuzzySketch {
  BitString s1;
  BitString s2;
};

/// Repeats each bit of s1 r times.
BitString repetition_encode(const BitString& s1, std::uint32_t r);

/// Gen(B_m) = (S_1, S_2): draws k uniform bits, offsets their codeword by
/// the biometric. Throws if |b| != k*r.
FuzzySketch fe_gen(const BitString& b, const FuzzyParams& p, Rng& rng);

/// Rep(B_m', S_2) = S_1': majority-decodes (b' xor s2) blockwise. Recovers
/// the enrolled s1 whenever every r-bit block saw at most t flips; a block
/// with more flips silently decodes to the wrong bit.
BitString fe_rep(const BitString& b_prime, const BitString& s2, const FuzzyParams& p);

/// Copy of b with exactly `flips` distinct positions inverted, chosen
/// uniformly. Throws if flips > |b|.
BitString perturb_biometric(const BitString& b, std::size_t flips, Rng& rng);

/// Copy of b with up to `max_flips_per_block` positions inverted inside
/// every r-bit block (count drawn uniformly per block). Stays within the
/// decoder's correction radius when max_flips_per_block <= t.
BitString perturb_biometric_blockwise(const BitString& b, const FuzzyParams& p,
                                      std::uint32_t max_flips_per_block, Rng& rng);

}  // namespace pufauth
