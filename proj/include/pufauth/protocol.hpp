#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pufauth/common.hpp"
#include "pufauth/crypto.hpp"
#include "pufauth/ledger.hpp"
#include "pufauth/variant.hpp"
#include "pufauth/wire.hpp"

namespace pufauth {

struct ProtocolConfig {
  ProtocolVariant variant = ProtocolVariant::P21_FIX;
  std::uint64_t delta_ms = 2000;  // enhanced freshness window
  FuzzyParams fuzzy{32, 5};
  bool disable_identity_verify = false;  // debug knob; re-opens the identity-modification hole

  bool enhanced() const { return is_enhanced(variant); }
  bool p22() const { return is_p22(variant); }
  bool fuzzy_login() const { return uses_fuzzy_login(variant); }
};

enum class Step { login, m1, m2, m3, m4, m5, ledger };

enum class RejectReason {
  login_failed,
  unknown_identity,
  replay,
  gateway_auth,
  user_auth,
  sensor_auth,
  identity_tamper,
  protocol_order,
  pool_exhausted,
  ledger_failed,
  timeout,
  malformed,
};

const char* step_name(Step s);
const char* reject_reason_name(RejectReason r);
Step step_from_name(std::string_view name);
RejectReason reject_reason_from_name(std::string_view name);

struct Reject {
  Step at{};
  RejectReason reason{};
  friend bool operator==(const Reject&, const Reject&) = default;
};

/// Result of feeding one message to a party: at most one of {out, ledger_txs,
/// complete} on success, or a reject. Rejects leave party state untouched.
struct StepOut {
  std::optional<Message> out;
  std::vector<Message> ledger_txs;  // gateway after M5, 2022 variants only
  bool complete = false;
  std::optional<Reject> reject;

  bool ok() const { return !reject.has_value(); }
};

/// Anti-replay bookkeeping. Baseline variants remember plain nonces (any new
/// random value passes, which is exactly the weakness under study); enhanced
/// variants check a timestamp window and remember (nonce, ts) pairs for 2*delta.
struct FreshnessCache {
  std::unordered_set<Value256, Value256Hasher> seen_nonces;
  std::vector<std::pair<Value256, Timestamp>> seen_stamped;
  std::optional<Timestamp> last_ts;
};

enum class Freshness { fresh, stale };

/// Validates and records in one step: baseline inserts the nonce, enhanced
/// inserts the (nonce, ts) pair. Handlers instead use peek early and note
/// only once every other check passed, so rejected messages leave the cache
/// untouched.
Freshness freshness_check(FreshnessCache& cache, const Value256& nonce,
                          std::optional<Timestamp> ts, const SimClock& clock,
                          const ProtocolConfig& cfg, bool binding_tag_ok = true);

Freshness freshness_peek(const FreshnessCache& cache, const Value256& nonce,
                         std::optional<Timestamp> ts, const SimClock& clock,
                         const ProtocolConfig& cfg, bool binding_tag_ok = true);

void freshness_note(FreshnessCache& cache, const Value256& nonce, std::optional<Timestamp> ts,
                    const SimClock& clock, const ProtocolConfig& cfg);

struct CrPair {
  Value256 challenge;
  Value256 response;
};

/// Challenge-response pool enrolled at registration. Pairs are immutable;
/// only the cursor moves, one pair per completed session, never reused.
class CrPool {
 public:
  CrPool() = default;
  explicit CrPool(std::vector<CrPair> pairs) : pairs_(std::move(pairs)) {}

  const CrPair* peek() const { return cursor_ < pairs_.size() ? &pairs_[cursor_] : nullptr; }
  void advance() {
    if (cursor_ >= pairs_.size()) throw Error("CRP pool exhausted");
    ++cursor_;
  }
  std::size_t size() const { return pairs_.size(); }
  std::size_t cursor() const { return cursor_; }
  const std::vector<CrPair>& pairs() const { return pairs_; }

 private:
  std::vector<CrPair> pairs_;
  std::size_t cursor_ = 0;
};

struct GwUserRecord {
  Value256 id_u;
  Value256 beta_u;                      // current temporary identity
  std::optional<Value256> beta_u_new;   // pending, committed when the session ends
  Value256 k_u;
  CrPool pool;
  std::optional<Value256> sk_u;
  FreshnessCache fresh;
  std::optional<BitString> s1;  // 2022 variants: extraction string captured at registration
};

struct GwSensorRecord {
  Value256 id_sn;
  Value256 beta_sn;
  std::optional<Value256> beta_sn_new;
  Value256 k_sn;
  CrPool pool;
  std::optional<Value256> sk_sn;
  FreshnessCache fresh;
};

struct SensorRegOffer {
  RegChallenge challenge;
  Value256 k_sn;
};

class Gateway {
 public:
  Gateway(ProtocolConfig cfg, Ledger* ledger, Value256 contract_addr);

  // -- registration, secure channel (direct calls, never on the wire) --
  RegChallenge reg_begin_user(const RegReq& req, std::uint32_t n_add, Rng& rng,
                              bool repeat_challenge = false);
  RegIssue reg_complete_user(const RegResponse& resp, Rng& rng, bool issue_k_equal_r);
  void reg_store_user_s1(const Value256& beta_u, const BitString& s1);
  SensorRegOffer reg_begin_sensor(const Value256& id_sn, std::uint32_t n_add, Rng& rng);
  RegIssue reg_complete_sensor(const RegResponse& resp, Rng& rng);
  /// 2022 variants anchor each registration on the ledger; a ledger fault
  /// surfaces as an Error here.
  void reg_anchor(const Value256& id, bool is_user, SimClock& clock, Rng& rng);

  // -- mutual authentication, public channel --
  StepOut handle_m1(const M1& m1, Rng& rng, SimClock& clock);
  StepOut handle_m3(const M3& m3, Rng& rng, SimClock& clock);
  StepOut handle_m5(const M5& m5, SimClock& clock);
  StepOut handle_ledger_reply(const LedgerReply& reply, SimClock& clock);

  const std::vector<GwUserRecord>& user_records() const { return users_; }
  const std::vector<GwSensorRecord>& sensor_records() const { return sensors_; }
  const GwUserRecord* find_user(const Value256& beta) const;
  const GwSensorRecord* find_sensor(const Value256& beta) const;
  bool session_open() const { return session_.has_value(); }
  const ProtocolConfig& config() const { return cfg_; }

 private:
  struct PendingReg {
    Value256 id;
    std::vector<Value256> challenges;
    Value256 offered_k;  // sensor flow: key sent alongside the challenges
    bool is_user = false;
  };
  struct Session {
    enum class Phase { awaiting_m3, awaiting_m5, awaiting_ledger };
    Phase phase = Phase::awaiting_m3;
    Value256 user_beta;
    CrPair user_pair;
    Value256 sk_u;
    Value256 sensor_beta;
    CrPair sensor_pair;
    Value256 sk_sn;
    int ledger_oks = 0;
  };

  GwUserRecord* lookup_user(const Value256& beta);
  GwSensorRecord* lookup_sensor(const Value256& beta);

  ProtocolConfig cfg_;
  Ledger* ledger_;
  Value256 contract_addr_;
  std::vector<GwUserRecord> users_;
  std::vector<GwSensorRecord> sensors_;
  std::optional<PendingReg> pending_reg_;
  std::optional<Session> session_;
};

class UserDevice {
 public:
  UserDevice(ProtocolConfig cfg, Value256 id, Value256 puf_secret);

  // -- registration --
  RegReq reg_request() const { return RegReq{id_}; }
  RegResponse reg_answer(const RegChallenge& ch) const;
  void reg_finish(const RegIssue& issue, const BitString& biometric, const Value256& hard_token,
                  Rng& rng);

  // -- login + authentication --
  bool login(const BitString& presented_biometric, const Value256& presented_token);
  M1 auth_init(const Value256& target_beta_sn, Rng& rng, SimClock& clock);
  StepOut handle_m2(const M2& m2, Rng& rng, SimClock& clock);

  const Value256& id() const { return id_; }
  const Value256& beta() const { return beta_u_; }
  const std::optional<Value256>& session_key() const { return sk_u_; }
  bool registered() const { return registered_; }
  bool logged_in() const { return logged_in_; }
  const PufDevice& puf() const { return puf_; }
  const std::optional<BitString>& enrolled_s1() const { return s1_; }
  const std::optional<BitString>& helper_string() const { return s2_; }

 private:
  struct Session {
    Value256 n1;
    Value256 target_beta_sn;
  };

  ProtocolConfig cfg_;
  Value256 id_;
  PufDevice puf_;
  bool registered_ = false;
  Value256 beta_u_;
  Value256 k_u_;
  std::optional<Value256> x_;      // baseline login digest h(B_m||H_t)
  std::optional<Value256> delta_;  // fuzzy login digest h(S_1||H_t)
  std::optional<BitString> s1_;    // kept in-device for 2022 registration anchoring
  std::optional<BitString> s2_;
  std::optional<Value256> sk_u_;
  bool logged_in_ = false;
  std::optional<Session> session_;
  FreshnessCache fresh_;
};

class SensorNode {
 public:
  SensorNode(ProtocolConfig cfg, Value256 id, Value256 puf_secret);

  RegResponse reg_answer(const SensorRegOffer& offer);
  void reg_finish(const RegIssue& issue);

  StepOut handle_m4(const M4& m4, Rng& rng, SimClock& clock);

  const Value256& id() const { return id_; }
  const Value256& beta() const { return beta_sn_; }
  const std::optional<Value256>& session_key() const { return sk_sn_; }
  bool registered() const { return registered_; }
  const PufDevice& puf() const { return puf_; }

 private:
  ProtocolConfig cfg_;
  Value256 id_;
  PufDevice puf_;
  bool registered_ = false;
  Value256 beta_sn_;
  Value256 k_sn_;
  std::optional<Value256> sk_sn_;
  FreshnessCache fresh_;
};

/// Runs the five-step user registration exchange in-process (the secure
/// channel is a direct call path). Enrolls 1+n_add challenge-response pairs.
void register_user(Gateway& gw, UserDevice& ud, const BitString& biometric,
                   const Value256& hard_token, std::uint32_t n_add, Rng& rng, SimClock& clock,
                   bool issue_k_equal_r = false);

/// Gateway-initiated sensor registration, mirror of register_user.
void register_sensor(Gateway& gw, SensorNode& sn, std::uint32_t n_add, Rng& rng, SimClock& clock);

}  // namespace pufauth
