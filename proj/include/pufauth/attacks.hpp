#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pufauth/sim.hpp"

namespace pufauth {

enum class AttackId { a1_biometric, a2_plaintext_sk, a3_identity_mod, a4_replay };

std::string attack_name(AttackId a);
AttackId attack_from_name(std::string_view name);

enum class TamperTarget { user, sensor };

enum class ReplayMode {
  fresh_nonce,          // baseline: captured M1, nonce swapped for a new random value
  unchanged_duplicate,  // enhanced: identical (nonce, ts) pair re-sent inside the window
  unchanged_stale,      // enhanced: identical M1 re-sent after the window elapsed
  rewritten_ts,         // enhanced: ts rewritten to now, binding tag left as captured
};

const char* replay_mode_name(ReplayMode m);

struct AttackEvidence {
  std::uint32_t trials = 0;
  std::uint32_t hits = 0;  // attack-specific trial successes (e.g. failed logins)
  std::optional<Value256> recovered_key;
  std::optional<std::string> session1;  // outcome of the attacked session
  std::optional<std::string> session2;  // outcome of the follow-up honest session
  std::optional<bool> identity_preserved;
  std::optional<bool> desync;
  std::optional<bool> replay_accepted;
  std::optional<std::string> detail;

  bool empty() const {
    return hits == 0 && !recovered_key && !session1 && !session2 && !identity_preserved &&
           !desync && !replay_accepted && !detail;
  }
};

struct AttackOutcome {
  AttackId attack{};
  ProtocolVariant variant{};
  bool succeeded = false;
  AttackEvidence evidence;
  std::vector<Trace> traces;  // chronological session traces
};

/// Availability failure from biometric noise: `trials` logins, each with
/// `flips` uniformly chosen bits inverted. Succeeds when any legitimate
/// login fails.
AttackOutcome attack_biometric_noise(World& world, std::size_t flips, std::uint32_t trials);

/// Passive recovery of the user's session key from R_u* in M3. Works only
/// when the as-written derivation lines up, i.e. the world was provisioned
/// with K_u = R_u.
AttackOutcome attack_plaintext_sk(World& world);

/// Flips one bit of the identity update in flight (beta_u_new in M2 or
/// beta_sn_new in M4), then attempts a follow-up session. Baseline devices
/// store the update unverified and the next session dies with
/// unknown-identity; hardened devices drop the message in-session.
AttackOutcome attack_identity_modification(World& world, TamperTarget target, std::uint32_t bit);

/// Replays a captured M1. The baseline mode swaps in a fresh random nonce
/// mid-session and the gateway accepts it, which overwrites the live session
/// key and desynchronises the user's identity. Enhanced modes re-send the
/// capture in the three ways the hardened freshness rule must catch.
AttackOutcome attack_replay(World& world, ReplayMode mode);

/// The expected attack/defense matrix.
bool expected_attack_success(AttackId a, ProtocolVariant v);

}  // namespace pufauth
