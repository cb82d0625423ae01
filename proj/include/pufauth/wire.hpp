#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "pufauth/common.hpp"
#include "pufauth/variant.hpp"

namespace pufauth {

// Wire messages. Registration runs over the secure channel (direct calls);
// M1..M5 and the ledger round run over the public channel and are what the
// adversary sees, so their byte layout is canonical: 1-byte tag, fields in
// declaration order, Value256 raw, integers big-endian, bit strings and byte
// strings length-prefixed. Optional fields are present exactly when the
// session's variant requires them, so parsing takes the variant as context.

struct RegReq {
  Value256 id;
  friend bool operator==(const RegReq&, const RegReq&) = default;
};

struct RegChallenge {
  Value256 c;
  std::vector<Value256> c_add;
  friend bool operator==(const RegChallenge&, const RegChallenge&) = default;
};

struct RegResponse {
  Value256 r;
  std::vector<Value256> r_add;
  friend bool operator==(const RegResponse&, const RegResponse&) = default;
};

struct RegIssue {
  Value256 beta;
  Value256 k;
  friend bool operator==(const RegIssue&, const RegIssue&) = default;
};

struct M1 {
  Value256 beta_u;
  Value256 n1;
  std::optional<Timestamp> ts;  // enhanced variants
  std::optional<Value256> v1;   // enhanced variants: h(beta_u||K_u||ts||N1)
  friend bool operator==(const M1&, const M1&) = default;
};

struct M2 {
  Value256 n2;
  Value256 k_u_star;
  Value256 c_u_star;
  Value256 sk_u_star;
  Value256 beta_u_new;
  std::optional<Value256> j;    // P22 variants: h(R_u||K_u)
  std::optional<Timestamp> ts;  // enhanced variants
  friend bool operator==(const M2&, const M2&) = default;
};

struct M3 {
  Value256 r_u_star;
  Value256 n3;
  Value256 beta_sn;
  std::optional<Timestamp> ts;
  friend bool operator==(const M3&, const M3&) = default;
};

struct M4 {
  Value256 n4;
  Value256 beta_u;
  Value256 k_sn_star;
  Value256 c_sn_star;
  Value256 sk_sn_star;
  Value256 beta_sn_new;
  std::optional<Value256> auth_sn;  // P22 variants: h(K_sn||R_sn)
  std::optional<Timestamp> ts;
  friend bool operator==(const M4&, const M4&) = default;
};

struct M5 {
  Value256 n5;
  Value256 r_sn_star;
  std::optional<Timestamp> ts;
  friend bool operator==(const M5&, const M5&) = default;
};

struct LedgerTx {
  std::vector<std::uint8_t> g;  // G_1 or G_2 payload
  Value256 tx_hash;             // request id: h(g||contract_addr||ts)
  Value256 contract_addr;
  Timestamp ts;
  friend bool operator==(const LedgerTx&, const LedgerTx&) = default;
};

struct LedgerReply {
  bool ok = false;
  friend bool operator==(const LedgerReply&, const LedgerReply&) = default;
};

using Message = std::variant<RegReq, RegChallenge, RegResponse, RegIssue, M1, M2, M3, M4, M5,
                             LedgerTx, LedgerReply>;

enum class MsgTag : std::uint8_t {
  reg_req = 1,
  reg_challenge = 2,
  reg_response = 3,
  reg_issue = 4,
  m1 = 5,
  m2 = 6,
  m3 = 7,
  m4 = 8,
  m5 = 9,
  ledger_tx = 10,
  ledger_reply = 11,
};

MsgTag tag_of(const Message& m);
bool is_registration(const Message& m);
const char* tag_name(MsgTag t);

class WireError : public Error {
 public:
  using Error::Error;
};

std::vector<std::uint8_t> serialize(const Message& m);

/// Parses a canonical message. The variant decides which optional fields
/// must be present; trailing garbage or missing bytes raise WireError.
Message parse(std::span<const std::uint8_t> bytes, ProtocolVariant v);

}  // namespace pufauth
