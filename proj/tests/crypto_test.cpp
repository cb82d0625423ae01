#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pufauth/crypto.hpp"

using namespace pufauth;

namespace {

// Independent reference for the code-offset construction: plain loops, no
// shared code with fe_gen/fe_rep beyond BitString.
BitString oracle_encode(const BitString& s1, std::uint32_t r) {
  BitString out(s1.size() * r);
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, s1.at(i / r));
  return out;
}

BitString oracle_decode(const BitString& w, std::uint32_t k, std::uint32_t r) {
  BitString out(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    int ones = 0;
    for (std::uint32_t j = 0; j < r; ++j) ones += w.at(std::size_t{i} * r + j);
    out.set(i, 2 * ones > static_cast<int>(r) ? 1 : 0);
  }
  return out;
}

BitString int_to_bits(std::uint32_t x, std::size_t n) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, (x >> i) & 1);
  return b;
}

}  // namespace

TEST_CASE("sha256 matches the published test vectors") {
  CHECK(sha256(std::string_view("")).hex() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256(std::string_view("abc")).hex() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256(std::string_view("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")).hex() ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // long input exercises multi-block + padding paths
  std::string million(1000000, 'a');
  CHECK(sha256(std::string_view(million)).hex() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 is deterministic") {
  auto a = sha256(std::string_view("determinism"));
  auto b = sha256(std::string_view("determinism"));
  CHECK(a == b);
}

TEST_CASE("length-prefixed concatenation removes boundary ambiguity") {
  auto ab_c = HashInput().add("ab").add("c").digest();
  auto a_bc = HashInput().add("a").add("bc").digest();
  auto abc = sha256(std::string_view("abc"));
  CHECK(ab_c != a_bc);
  CHECK(ab_c != abc);
  CHECK(a_bc != abc);
  // same split twice gives the same digest
  CHECK(ab_c == HashInput().add("ab").add("c").digest());
}

TEST_CASE("xor involution and patterns") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    Value256 a = rng.value256();
    Value256 b = rng.value256();
    CHECK(((a ^ b) ^ b) == a);
  }
  Value256 a = rng.value256();
  CHECK((a ^ a).is_zero());

  Value256 ff, pattern;
  ff.bytes.fill(0xff);
  pattern.bytes.fill(0x0f);
  Value256 expect;
  expect.bytes.fill(0xf0);
  CHECK((ff ^ pattern) == expect);
}

TEST_CASE("puf evaluation is pure and device/challenge sensitive") {
  Rng rng(2);
  PufDevice dev_a(rng.value256());
  PufDevice dev_b(rng.value256());
  Value256 c1 = rng.value256();
  Value256 c2 = rng.value256();

  CHECK(dev_a.eval(c1) == dev_a.eval(c1));
  CHECK(dev_a.eval(c1) != dev_a.eval(c2));
  CHECK(dev_a.eval(c1) != dev_b.eval(c1));
}

TEST_CASE("fe_gen worked example at k=2, r=3") {
  FuzzyParams p(2, 3);
  CHECK(p.t() == 1);
  BitString b = BitString::from_string("110011");

  // force s1 = 10 by searching a seed that draws it (keeps the example exact)
  for (std::uint64_t seed = 0;; ++seed) {
    Rng rng(seed);
    FuzzySketch sk = fe_gen(b, p, rng);
    if (sk.s1.to_string() == "10") {
      CHECK(repetition_encode(sk.s1, p.r).to_string() == "111000");
      CHECK(sk.s2.to_string() == "001011");
      break;
    }
    REQUIRE(seed < 64);  // expected after ~4 tries
  }
}

TEST_CASE("fe_rep worked example and failure profile at k=2, r=3") {
  FuzzyParams p(2, 3);
  BitString b = BitString::from_string("110011");
  BitString s2 = BitString::from_string("001011");  // from the worked example, s1 = 10

  CHECK(fe_rep(b, s2, p).to_string() == "10");

  // every single flip inside a block stays within t=1
  for (std::size_t pos = 0; pos < b.size(); ++pos) {
    BitString noisy = b;
    noisy.flip(pos);
    CHECK(fe_rep(noisy, s2, p).to_string() == "10");
  }

  // two flips inside one block exceed t and decode the wrong bit
  for (std::uint32_t blk = 0; blk < p.k; ++blk) {
    for (std::uint32_t i = 0; i < p.r; ++i) {
      for (std::uint32_t j = i + 1; j < p.r; ++j) {
        BitString noisy = b;
        noisy.flip(blk * p.r + i);
        noisy.flip(blk * p.r + j);
        CHECK(fe_rep(noisy, s2, p) != fe_rep(b, s2, p));
      }
    }
  }
}

TEST_CASE("codeword biometric gives an all-zero helper string") {
  FuzzyParams p(2, 3);
  Rng rng(7);
  // b equal to encode(s1) for whatever s1 the rng draws
  for (int trial = 0; trial < 4; ++trial) {
    Rng probe(100 + trial);
    BitString s1 = probe.bits(p.k);
    BitString b = repetition_encode(s1, p.r);
    Rng same(100 + trial);
    FuzzySketch sk = fe_gen(b, p, same);
    CHECK(sk.s1 == s1);
    CHECK(sk.s2.to_string() == std::string(p.biometric_len(), '0'));
  }
  (void)rng;
}

TEST_CASE("fe_gen/fe_rep equal the brute-force oracle exhaustively at k=2, r=3") {
  FuzzyParams p(2, 3);
  const std::size_t len = p.biometric_len();  // 6

  // all <=1-flip-per-block noise masks: {000,100,010,001} x {000,100,010,001}
  std::vector<BitString> noises;
  for (int b0 = -1; b0 < 3; ++b0) {
    for (int b1 = -1; b1 < 3; ++b1) {
      BitString noise(len);
      if (b0 >= 0) noise.flip(static_cast<std::size_t>(b0));
      if (b1 >= 0) noise.flip(3 + static_cast<std::size_t>(b1));
      noises.push_back(noise);
    }
  }
  REQUIRE(noises.size() == 16);

  std::size_t checked = 0;
  for (std::uint32_t bio = 0; bio < 64; ++bio) {
    BitString b = int_to_bits(bio, len);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      Rng rng(seed);
      FuzzySketch sk = fe_gen(b, p, rng);
      // sketch construction agrees with the oracle
      CHECK(sk.s2 == oracle_encode(sk.s1, p.r).xored(b));
      for (const BitString& noise : noises) {
        BitString noisy = b.xored(noise);
        BitString recovered = fe_rep(noisy, sk.s2, p);
        CHECK(recovered == sk.s1);
        CHECK(recovered == oracle_decode(noisy.xored(sk.s2), p.k, p.r));
        ++checked;
      }
    }
  }
  CHECK(checked == 64u * 4u * 16u);
}

TEST_CASE("fuzzy extractor at production parameters, sampled") {
  FuzzyParams p(32, 5);
  CHECK(p.t() == 2);
  CHECK(p.biometric_len() == 160);
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    BitString b = rng.bits(p.biometric_len());
    FuzzySketch sk = fe_gen(b, p, rng);
    BitString noisy = perturb_biometric_blockwise(b, p, p.t(), rng);
    CHECK(fe_rep(noisy, sk.s2, p) == sk.s1);
  }
}

TEST_CASE("repetition decoder fails on any block with >= t+1 flips at k=2, r=5") {
  FuzzyParams p(2, 5);
  Rng rng(13);
  BitString b = rng.bits(p.biometric_len());
  FuzzySketch sk = fe_gen(b, p, rng);

  // enumerate all 3-, 4- and 5-flip patterns confined to one block
  for (std::uint32_t blk = 0; blk < p.k; ++blk) {
    for (std::uint32_t mask = 1; mask < 32; ++mask) {
      const int flips = __builtin_popcount(mask);
      if (flips <= static_cast<int>(p.t())) continue;
      BitString noisy = b;
      for (std::uint32_t i = 0; i < 5; ++i)
        if (mask & (1u << i)) noisy.flip(blk * 5 + i);
      BitString rec = fe_rep(noisy, sk.s2, p);
      CHECK(rec.at(blk) != sk.s1.at(blk));  // the hit block decodes wrong
    }
  }
}

TEST_CASE("fe_gen validates the biometric length") {
  FuzzyParams p(2, 3);
  Rng rng(17);
  BitString wrong(5);
  CHECK_THROWS_AS(fe_gen(wrong, p, rng), Error);
}

TEST_CASE("fuzzy params validation") {
  CHECK_THROWS_AS(FuzzyParams(0, 3), Error);
  CHECK_THROWS_AS(FuzzyParams(2, 4), Error);
  CHECK_THROWS_AS(FuzzyParams(2, 1), Error);
}

TEST_CASE("perturb_biometric flips exactly the requested count") {
  Rng rng(19);
  BitString b = rng.bits(160);

  CHECK(perturb_biometric(b, 0, rng) == b);
  CHECK(perturb_biometric(b, 1, rng).hamming_distance(b) == 1);
  for (std::size_t flips : {2u, 7u, 80u}) {
    CHECK(perturb_biometric(b, flips, rng).hamming_distance(b) == flips);
  }

  BitString complement = perturb_biometric(b, b.size(), rng);
  CHECK(complement.hamming_distance(b) == b.size());
  CHECK_THROWS_AS(perturb_biometric(b, b.size() + 1, rng), Error);
}

TEST_CASE("blockwise perturbation stays within the per-block budget") {
  FuzzyParams p(32, 5);
  Rng rng(23);
  BitString b = rng.bits(p.biometric_len());
  for (int trial = 0; trial < 100; ++trial) {
    BitString noisy = perturb_biometric_blockwise(b, p, 2, rng);
    for (std::uint32_t blk = 0; blk < p.k; ++blk) {
      int flips = 0;
      for (std::uint32_t i = 0; i < p.r; ++i)
        flips += b.at(blk * p.r + i) != noisy.at(blk * p.r + i);
      CHECK(flips <= 2);
    }
  }
}

TEST_CASE("rng is deterministic per seed and unbiased index sampling stays in range") {
  Rng a(42), b(42), c(43);
  CHECK(a.value256() == b.value256());
  CHECK(a.bits(100) == b.bits(100));
  CHECK(a.value256() != c.value256());
  for (int i = 0; i < 1000; ++i) CHECK(a.index(7) < 7);

  // nonce distinctness over many draws
  Rng n(4);
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(n.value256().hex());
  CHECK(seen.size() == 1000);
}

TEST_CASE("value256 hex round-trip") {
  Rng rng(29);
  Value256 v = rng.value256();
  CHECK(Value256::from_hex(v.hex()) == v);
  CHECK_THROWS_AS(Value256::from_hex("abc"), Error);
}

TEST_CASE("op counters observe hash, xor and puf calls in scope") {
  OpCounters ops;
  Rng rng(31);
  Value256 a = rng.value256(), b = rng.value256();
  PufDevice dev(rng.value256());
  {
    CounterScope scope(ops);
    (void)HashInput().add(a).add(b).digest();
    (void)(a ^ b);
    (void)dev.eval(a);
  }
  CHECK(ops.hash == 2);  // explicit digest + the one inside the puf
  CHECK(ops.xor_ops == 1);
  CHECK(ops.puf == 1);
  (void)dev.eval(a);  // outside any scope: not counted
  CHECK(ops.puf == 1);
}
