#include "pufauth/attacks.hpp"

namespace pufauth {

namespace {

// Flip one bit of a 256-bit value; position 0 is the most significant bit of
// byte 0, matching the trace hex rendering.
void flip_bit(Value256& v, std::uint32_t bit) {
  if (bit >= 256) throw Error("bit position out of range");
  v.bytes[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
}

class PassiveRecorder : public Adversary {
 public:
  Tamper on_message(PartyId, PartyId, const Message& m) override {
    if (const auto* m3 = std::get_if<M3>(&m)) r_u_star_ = m3->r_u_star;
    return {};
  }
  const std::optional<Value256>& r_u_star() const { return r_u_star_; }

 private:
  std::optional<Value256> r_u_star_;
};

class IdentityTamperer : public Adversary {
 public:
  IdentityTamperer(TamperTarget target, std::uint32_t bit) : target_(target), bit_(bit) {}

  Tamper on_message(PartyId, PartyId, const Message& m) override {
    if (done_) return {};
    if (target_ == TamperTarget::user) {
      if (const auto* m2 = std::get_if<M2>(&m)) {
        M2 tampered = *m2;
        flip_bit(tampered.beta_u_new, bit_);
        done_ = true;
        return {false, Message{tampered}};
      }
    } else {
      if (const auto* m4 = std::get_if<M4>(&m)) {
        M4 tampered = *m4;
        flip_bit(tampered.beta_sn_new, bit_);
        done_ = true;
        return {false, Message{tampered}};
      }
    }
    return {};
  }

 private:
  TamperTarget target_;
  std::uint32_t bit_;
  bool done_ = false;
};

class Replayer : public Adversary {
 public:
  Replayer(ReplayMode mode, const WorldParams& params, Rng& nonce_rng)
      : mode_(mode), params_(params), nonce_rng_(nonce_rng) {}

  void on_event(const ChannelEvent& ev) override {
    if (ev.payload.empty()) return;
    const auto tag = static_cast<MsgTag>(ev.payload[0]);
    if (ev.kind == EventKind::deliver && tag == MsgTag::m1 && !captured_) {
      captured_ = std::get<M1>(parse(ev.payload, params_.variant));
      captured_at_ = ev.sim_time.millis;
      return;
    }
    if (mode_ == ReplayMode::fresh_nonce && ev.kind == EventKind::deliver && tag == MsgTag::m2 &&
        captured_ && !scheduled_) {
      // re-send while the legitimate M3 is still in flight
      M1 replay = *captured_;
      replay.n1 = nonce_rng_.value256();
      queue_.push_back({PartyId::gw, replay, ev.sim_time.millis + 3});
      scheduled_ = true;
    }
    if (mode_ != ReplayMode::fresh_nonce && ev.kind == EventKind::drop && tag == MsgTag::m2 &&
        captured_ && !scheduled_) {
      M1 replay = *captured_;
      std::uint64_t at = 0;
      switch (mode_) {
        case ReplayMode::unchanged_duplicate:
          at = ev.sim_time.millis + 5;
          break;
        case ReplayMode::unchanged_stale:
          at = captured_->ts->millis + params_.delta_ms + 500;
          break;
        case ReplayMode::rewritten_ts:
          at = ev.sim_time.millis + 5;
          replay.ts = Timestamp{at};  // fresh-looking timestamp, stale tag
          break;
        default:
          break;
      }
      queue_.push_back({PartyId::gw, replay, at});
      scheduled_ = true;
    }
  }

  Tamper on_message(PartyId, PartyId, const Message& m) override {
    // enhanced modes abort the session by eating M2, so the pre-commit world
    // state stays live while the replay goes in
    if (mode_ != ReplayMode::fresh_nonce && std::holds_alternative<M2>(m) && !m2_dropped_) {
      m2_dropped_ = true;
      return {true, std::nullopt};
    }
    return {};
  }

  std::vector<Injection> take_due(std::uint64_t horizon_ms) override {
    std::vector<Injection> due;
    std::erase_if(queue_, [&](const Injection& inj) {
      if (inj.at_ms <= horizon_ms) {
        due.push_back(inj);
        return true;
      }
      return false;
    });
    return due;
  }

  void on_injection_result(const Message& injected, const StepOut& result) override {
    if (!std::holds_alternative<M1>(injected)) return;
    accepted_ = result.ok() && result.out.has_value();
    if (result.reject) reject_reason_ = reject_reason_name(result.reject->reason);
  }

  bool replay_delivered() const { return accepted_.has_value(); }
  bool accepted() const { return accepted_.value_or(false); }
  const std::optional<std::string>& reject_reason() const { return reject_reason_; }

 private:
  ReplayMode mode_;
  WorldParams params_;
  Rng& nonce_rng_;
  std::optional<M1> captured_;
  std::uint64_t captured_at_ = 0;
  bool scheduled_ = false;
  bool m2_dropped_ = false;
  std::vector<Injection> queue_;
  std::optional<bool> accepted_;
  std::optional<std::string> reject_reason_;
};

}  // namespace

std::string attack_name(AttackId a) {
  switch (a) {
    case AttackId::a1_biometric: return "a1-biometric";
    case AttackId::a2_plaintext_sk: return "a2-plaintext-sk";
    case AttackId::a3_identity_mod: return "a3-identity-mod";
    case AttackId::a4_replay: return "a4-replay";
  }
  return "?";
}

AttackId attack_from_name(std::string_view name) {
  for (AttackId a : {AttackId::a1_biometric, AttackId::a2_plaintext_sk, AttackId::a3_identity_mod,
                     AttackId::a4_replay})
    if (name == attack_name(a)) return a;
  throw Error("unknown attack: " + std::string(name));
}

const char* replay_mode_name(ReplayMode m) {
  switch (m) {
    case ReplayMode::fresh_nonce: return "fresh-nonce";
    case ReplayMode::unchanged_duplicate: return "unchanged-duplicate";
    case ReplayMode::unchanged_stale: return "unchanged-stale";
    case ReplayMode::rewritten_ts: return "rewritten-ts";
  }
  return "?";
}

AttackOutcome attack_biometric_noise(World& world, std::size_t flips, std::uint32_t trials) {
  AttackOutcome out;
  out.attack = AttackId::a1_biometric;
  out.variant = world.params().variant;

  std::uint32_t failures = 0;
  for (std::uint32_t i = 0; i < trials; ++i) {
    BitString presented = perturb_biometric(world.enrolled_biometric(), flips, world.rng());
    if (!world.ud().login(presented, world.hard_token())) ++failures;
  }
  out.succeeded = failures > 0;
  out.evidence.trials = trials;
  out.evidence.hits = failures;
  out.evidence.detail = std::to_string(failures) + "/" + std::to_string(trials) + " logins failed";

  // one demonstration session with a perturbed presentation
  world.presented_biometric = perturb_biometric(world.enrolled_biometric(), flips, world.rng());
  Trace t = run_session(world, nullptr);
  out.evidence.session1 = t.outcome.text();
  out.traces.push_back(std::move(t));
  world.presented_biometric = world.enrolled_biometric();
  return out;
}

AttackOutcome attack_plaintext_sk(World& world) {
  AttackOutcome out;
  out.attack = AttackId::a2_plaintext_sk;
  out.variant = world.params().variant;

  PassiveRecorder eve;
  Trace t = run_session(world, &eve);
  out.evidence.session1 = t.outcome.text();
  out.traces.push_back(std::move(t));

  if (!eve.r_u_star()) {
    out.evidence.detail = "no M3 observed";
    return out;
  }
  const Value256 candidate = *eve.r_u_star();
  const auto& records = world.gw().user_records();
  const bool match = !records.empty() && records.front().sk_u && *records.front().sk_u == candidate;
  out.succeeded = match;
  if (match) {
    out.evidence.recovered_key = candidate;
    out.evidence.detail = "R_u* equals the gateway's stored session key";
  } else {
    out.evidence.detail = "R_u* does not match the gateway's session key";
  }
  return out;
}

AttackOutcome attack_identity_modification(World& world, TamperTarget target, std::uint32_t bit) {
  AttackOutcome out;
  out.attack = AttackId::a3_identity_mod;
  out.variant = world.params().variant;

  const Value256 identity_before =
      target == TamperTarget::user ? world.ud().beta() : world.sn().beta();

  IdentityTamperer mallory(target, bit);
  Trace s1 = run_session(world, &mallory);
  out.evidence.session1 = s1.outcome.text();

  const Value256 identity_now =
      target == TamperTarget::user ? world.ud().beta() : world.sn().beta();
  const bool tamper_rejected_in_session =
      !s1.outcome.complete && s1.outcome.reason == RejectReason::identity_tamper;
  out.evidence.identity_preserved = tamper_rejected_in_session && identity_now == identity_before;

  Trace s2 = run_session(world, nullptr);
  out.evidence.session2 = s2.outcome.text();
  const bool session2_unknown =
      !s2.outcome.complete && s2.outcome.reason == RejectReason::unknown_identity;
  out.evidence.desync = session2_unknown;

  // disruption achieved: the tampered update went through and the next
  // session can no longer resolve the identity
  out.succeeded = s1.outcome.complete && session2_unknown;
  out.traces.push_back(std::move(s1));
  out.traces.push_back(std::move(s2));
  return out;
}

AttackOutcome attack_replay(World& world, ReplayMode mode) {
  AttackOutcome out;
  out.attack = AttackId::a4_replay;
  out.variant = world.params().variant;

  // a completed honest session on record (establishes rotated identities)
  Trace s0 = run_session(world, nullptr);
  out.evidence.detail = std::string(replay_mode_name(mode)) + "; pre-session " + s0.outcome.text();

  Replayer adv(mode, world.params(), world.rng());
  Trace s1 = run_session(world, &adv);
  out.evidence.session1 = s1.outcome.text();
  out.evidence.replay_accepted = adv.accepted();
  if (adv.reject_reason())
    *out.evidence.detail += "; replay rejected: " + *adv.reject_reason();

  Trace s2 = run_session(world, nullptr);
  out.evidence.session2 = s2.outcome.text();
  out.evidence.desync =
      !s2.outcome.complete && s2.outcome.reason == RejectReason::unknown_identity;

  out.succeeded = adv.accepted();
  out.traces.push_back(std::move(s0));
  out.traces.push_back(std::move(s1));
  out.traces.push_back(std::move(s2));
  return out;
}

bool expected_attack_success(AttackId a, ProtocolVariant v) {
  switch (a) {
    case AttackId::a1_biometric:
      return !uses_fuzzy_login(v);  // raw biometric hash breaks under any noise
    case AttackId::a2_plaintext_sk:
      return v == ProtocolVariant::P21_AW;  // requires the K_u = R_u provisioning
    case AttackId::a3_identity_mod:
      return !is_enhanced(v);
    case AttackId::a4_replay:
      return !is_enhanced(v);
  }
  return false;
}

}  // namespace pufauth
