#include "pufauth/crypto.hpp"

#include <cstring>

namespace pufauth {

namespace {

// FIPS 180-4 constants.
constexpr std::uint32_t kRound[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

class Sha256 {
 public:
  void update(const std::uint8_t* data, std::size_t len) {
    total_ += len;
    while (len > 0) {
      std::size_t take = std::min(len, std::size_t{64} - fill_);
      std::memcpy(buf_ + fill_, data, take);
      fill_ += take;
      data += take;
      len -= take;
      if (fill_ == 64) {
        compress(buf_);
        fill_ = 0;
      }
    }
  }

  Value256 finish() {
    std::uint64_t bit_len = total_ * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    const std::uint8_t zero = 0;
    while (fill_ != 56) update(&zero, 1);
    std::uint8_t len_be[8];
    for (int i = 0; i < 8; ++i) len_be[i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
    update(len_be, 8);
    Value256 out;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 4; ++j)
        out.bytes[static_cast<std::size_t>(i * 4 + j)] =
            static_cast<std::uint8_t>(state_[i] >> (24 - 8 * j));
    return out;
  }

 private:
  void compress(const std::uint8_t* p) {
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = static_cast<std::uint32_t>(p[4 * i]) << 24 | static_cast<std::uint32_t>(p[4 * i + 1]) << 16 |
             static_cast<std::uint32_t>(p[4 * i + 2]) << 8 | static_cast<std::uint32_t>(p[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    std::uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
      std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      std::uint32_t ch = (e & f) ^ (~e & g);
      std::uint32_t t1 = h + s1 + ch + kRound[i] + w[i];
      std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      std::uint32_t t2 = s0 + maj;
      h = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
  }

  std::uint32_t state_[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                             0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::uint8_t buf_[64];
  std::size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

void append_u32_be(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (24 - 8 * i)));
}

}  // namespace

Value256 sha256(std::span<const std::uint8_t> data) {
  if (auto* c = CounterScope::active()) ++c->hash;
  Sha256 h;
  h.update(data.data(), data.size());
  return h.finish();
}

Value256 sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

HashInput& HashInput::add(std::span<const std::uint8_t> bytes) {
  append_u32_be(buf_, static_cast<std::uint32_t>(bytes.size()));
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  return *this;
}

HashInput& HashInput::add(const BitString& b) {
  // operand bytes: bit count, then MSB-first packed bits
  std::vector<std::uint8_t> operand;
  append_u32_be(operand, static_cast<std::uint32_t>(b.size()));
  auto packed = b.packed();
  operand.insert(operand.end(), packed.begin(), packed.end());
  return add(std::span(operand));
}

HashInput& HashInput::add(Timestamp ts) {
  std::uint8_t be[8];
  for (int i = 0; i < 8; ++i) be[i] = static_cast<std::uint8_t>(ts.millis >> (56 - 8 * i));
  return add(std::span<const std::uint8_t>(be, 8));
}

HashInput& HashInput::add(std::string_view s) {
  return add(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

Value256 HashInput::digest() const { return sha256(std::span(buf_)); }

Value256 PufDevice::eval(const Value256& challenge) const {
  if (auto* c = CounterScope::active()) ++c->puf;
  return HashInput().add(secret_).add(challenge).digest();
}

BitString repetition_encode(const BitString& s1, std::uint32_t r) {
  BitString out(s1.size() * r);
  for (std::size_t i = 0; i < s1.size(); ++i)
    for (std::uint32_t j = 0; j < r; ++j) out.set(i * r + j, s1.at(i));
  return out;
}

FuzzySketch fe_gen(const BitString& b, const FuzzyParams& p, Rng& rng) {
  p.validate();
  if (b.size() != p.biometric_len()) throw Error("fe_gen: biometric length != k*r");
  BitString s1 = rng.bits(p.k);
  BitString s2 = repetition_encode(s1, p.r).xored(b);
  return {std::move(s1), std::move(s2)};
}

BitString fe_rep(const BitString& b_prime, const BitString& s2, const FuzzyParams& p) {
  p.validate();
  if (b_prime.size() != p.biometric_len() || s2.size() != p.biometric_len())
    throw Error("fe_rep: input length != k*r");
  BitString w = b_prime.xored(s2);
  BitString s1(p.k);
  for (std::uint32_t i = 0; i < p.k; ++i) {
    std::uint32_t ones = 0;
    for (std::uint32_t j = 0; j < p.r; ++j) ones += w.at(std::size_t{i} * p.r + j);
    s1.set(i, ones > p.r / 2 ? 1 : 0);
  }
  return s1;
}

BitString perturb_biometric(const BitString& b, std::size_t flips, Rng& rng) {
  if (flips > b.size()) throw Error("perturb_biometric: flips > biometric length");
  // partial Fisher-Yates over the index vector picks `flips` distinct positions
  std::vector<std::size_t> idx(b.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  BitString out = b;
  for (std::size_t i = 0; i < flips; ++i) {
    std::size_t j = i + rng.index(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.flip(idx[i]);
  }
  return out;
}

BitString perturb_biometric_blockwise(const BitString& b, const FuzzyParams& p,
                                      std::uint32_t max_flips_per_block, Rng& rng) {
  if (b.size() != p.biometric_len()) throw Error("perturb blockwise: biometric length != k*r");
  if (max_flips_per_block > p.r) throw Error("perturb blockwise: flips > block size");
  BitString out = b;
  for (std::uint32_t blk = 0; blk < p.k; ++blk) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.index(max_flips_per_block + 1));
    // pick n distinct offsets in this block
    std::vector<std::uint32_t> offs(p.r);
    for (std::uint32_t i = 0; i < p.r; ++i) offs[i] = i;
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uint32_t j = i + static_cast<std::uint32_t>(rng.index(p.r - i));
      std::swap(offs[i], offs[j]);
      out.flip(std::size_t{blk} * p.r + offs[i]);
    }
  }
  return out;
}

}  // namespace pufauth
