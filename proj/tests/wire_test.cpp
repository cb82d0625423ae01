#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pufauth/wire.hpp"

using namespace pufauth;

namespace {

constexpr ProtocolVariant kAll[] = {ProtocolVariant::P21_AW, ProtocolVariant::P21_FIX,
                                    ProtocolVariant::P21_ENH, ProtocolVariant::P22,
                                    ProtocolVariant::P22_ENH};

// a random message of each kind, shaped for the given variant
std::vector<Message> sample_messages(ProtocolVariant v, Rng& rng) {
  const bool enh = is_enhanced(v);
  const bool p22 = is_p22(v);
  auto ots = [&]() -> std::optional<Timestamp> {
    if (enh) return Timestamp{rng.next_u64() % 100000};
    return std::nullopt;
  };

  std::vector<Message> out;
  out.push_back(RegReq{rng.value256()});
  out.push_back(RegChallenge{rng.value256(), {rng.value256(), rng.value256()}});
  out.push_back(RegResponse{rng.value256(), {rng.value256(), rng.value256()}});
  out.push_back(RegIssue{rng.value256(), rng.value256()});

  M1 m1{rng.value256(), rng.value256(), ots(),
        enh ? std::optional<Value256>(rng.value256()) : std::nullopt};
  out.push_back(m1);

  M2 m2{rng.value256(), rng.value256(), rng.value256(), rng.value256(), rng.value256(),
        p22 ? std::optional<Value256>(rng.value256()) : std::nullopt, ots()};
  out.push_back(m2);

  out.push_back(M3{rng.value256(), rng.value256(), rng.value256(), ots()});

  M4 m4{rng.value256(), rng.value256(), rng.value256(), rng.value256(), rng.value256(),
        rng.value256(), p22 ? std::optional<Value256>(rng.value256()) : std::nullopt, ots()};
  out.push_back(m4);

  out.push_back(M5{rng.value256(), rng.value256(), ots()});

  LedgerTx tx;
  tx.g = {1, 2, 3, 4, 5};
  tx.tx_hash = rng.value256();
  tx.contract_addr = rng.value256();
  tx.ts = Timestamp{rng.next_u64() % 100000};
  out.push_back(tx);
  out.push_back(LedgerReply{true});
  out.push_back(LedgerReply{false});
  return out;
}

}  // namespace

TEST_CASE("serialize/parse round-trips every message kind under every variant") {
  for (ProtocolVariant v : kAll) {
    Rng rng(static_cast<std::uint64_t>(v) + 100);
    for (int iter = 0; iter < 20; ++iter) {
      for (const Message& m : sample_messages(v, rng)) {
        auto bytes = serialize(m);
        Message back = parse(bytes, v);
        CHECK(back == m);
        CHECK(serialize(back) == bytes);
      }
    }
  }
}

TEST_CASE("canonical layout: tag byte plus fields in declaration order") {
  Rng rng(1);
  // baseline M1: tag + beta + n1
  M1 m1{rng.value256(), rng.value256(), std::nullopt, std::nullopt};
  auto bytes = serialize(m1);
  REQUIRE(bytes.size() == 1 + 32 + 32);
  CHECK(bytes[0] == static_cast<std::uint8_t>(MsgTag::m1));
  CHECK(std::equal(m1.beta_u.bytes.begin(), m1.beta_u.bytes.end(), bytes.begin() + 1));
  CHECK(std::equal(m1.n1.bytes.begin(), m1.n1.bytes.end(), bytes.begin() + 33));

  // enhanced M1 appends ts (8 bytes, big-endian) and v1
  M1 m1e{m1.beta_u, m1.n1, Timestamp{0x0102030405060708ull}, rng.value256()};
  auto ebytes = serialize(m1e);
  REQUIRE(ebytes.size() == 1 + 32 + 32 + 8 + 32);
  CHECK(ebytes[65] == 0x01);
  CHECK(ebytes[72] == 0x08);

  // P22 M2 carries j between beta_u_new and (absent) ts
  M2 m2{rng.value256(), rng.value256(), rng.value256(),
        rng.value256(), rng.value256(), rng.value256(),
        std::nullopt};
  CHECK(serialize(m2).size() == 1 + 6 * 32);
}

TEST_CASE("parse rejects truncated and oversized payloads") {
  Rng rng(2);
  M3 m3{rng.value256(), rng.value256(), rng.value256(), std::nullopt};
  auto bytes = serialize(m3);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(parse(truncated, ProtocolVariant::P21_FIX), WireError);

  auto padded = bytes;
  padded.push_back(0);
  CHECK_THROWS_AS(parse(padded, ProtocolVariant::P21_FIX), WireError);

  // a baseline message under an enhanced parse misses its ts/v1 fields
  CHECK_THROWS_AS(parse(bytes, ProtocolVariant::P21_ENH), WireError);

  CHECK_THROWS_AS(parse(std::vector<std::uint8_t>{}, ProtocolVariant::P21_FIX), WireError);
  CHECK_THROWS_AS(parse(std::vector<std::uint8_t>{99}, ProtocolVariant::P21_FIX), WireError);
}

TEST_CASE("registration messages are recognised as secure-channel only") {
  Rng rng(3);
  CHECK(is_registration(RegReq{rng.value256()}));
  CHECK(is_registration(RegIssue{rng.value256(), rng.value256()}));
  CHECK_FALSE(is_registration(M1{rng.value256(), rng.value256(), {}, {}}));
  CHECK_FALSE(is_registration(LedgerReply{true}));
}
