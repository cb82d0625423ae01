#pragma once

#include <string>
#include <string_view>

#include "pufauth/common.hpp"

namespace pufauth {

/// The five protocol flavours under study.
///
///   P21_AW  - 2021 three-party protocol exactly as written, including the
///             gateway/user-device XOR mismatch (GW masks the challenge with
///             the PUF response, UD unmasks with the secret key).
///   P21_FIX - same protocol with the mismatch repaired: both sides use
///             C* = C xor K.
///   P21_ENH - P21_FIX plus the hardening set: fuzzy-extractor login,
///             verified identity updates, timestamp freshness.
///   P22     - 2022 blockchain-backed variant: fuzzy login, gateway proof J,
///             sensor-side gateway proof, one shared session key, ledger
///             transactions after key agreement.
///   P22_ENH - P22 plus verified identity updates and timestamp freshness.
enum class ProtocolVariant { P21_AW, P21_FIX, P21_ENH, P22, P22_ENH };

constexpr bool is_p22(ProtocolVariant v) {
  return v == ProtocolVariant::P22 || v == ProtocolVariant::P22_ENH;
}

/// Hardened freshness + identity verification (the enhancement set).
constexpr bool is_enhanced(ProtocolVariant v) {
  return v == ProtocolVariant::P21_ENH || v == ProtocolVariant::P22_ENH;
}

/// Fuzzy-extractor login replaces the raw biometric hash.
constexpr bool uses_fuzzy_login(ProtocolVariant v) {
  return v == ProtocolVariant::P21_ENH || is_p22(v);
}

/// Under P21_AW the gateway masks C with the PUF response R; everywhere else
/// with the secret key K (what the user device always unmasks with).
constexpr bool gw_masks_challenge_with_response(ProtocolVariant v) {
  return v == ProtocolVariant::P21_AW;
}

std::string variant_name(ProtocolVariant v);
ProtocolVariant variant_from_name(std::string_view name);

}  // namespace pufauth
