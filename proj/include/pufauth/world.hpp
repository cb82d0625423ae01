#pragma once

#include <memory>

#include "pufauth/protocol.hpp"

namespace pufauth {

struct WorldParams {
  ProtocolVariant variant = ProtocolVariant::P21_FIX;
  std::uint64_t seed = 0;
  FuzzyParams fuzzy{32, 5};
  std::uint32_t pool_size = 8;  // 1 + n_add challenge-response pairs
  std::uint64_t delta_ms = 2000;
  bool ku_equals_ru = false;  // plaintext-key fixture: issue K_u := R_u
  bool disable_identity_verify = false;

  ProtocolConfig protocol_config() const {
    return ProtocolConfig{variant, delta_ms, fuzzy, disable_identity_verify};
  }
};

/// One user device, one gateway, one sensor node (and a ledger for the 2022
/// variants), registered and ready to authenticate. Construction is a pure
/// function of the params, which is what makes traces replayable.
class World {
 public:
  explicit World(const WorldParams& params);

  UserDevice& ud() { return *ud_; }
  Gateway& gw() { return *gw_; }
  SensorNode& sn() { return *sn_; }
  Ledger& ledger() { return *ledger_; }
  Rng& rng() { return rng_; }
  SimClock& clock() { return clock_; }
  const WorldParams& params() const { return params_; }

  const BitString& enrolled_biometric() const { return enrolled_biometric_; }
  const Value256& hard_token() const { return hard_token_; }
  const Value256& contract_addr() const { return contract_addr_; }

  /// What the user presents at the next login; attacks perturb this.
  BitString presented_biometric;
  Value256 presented_token;

 private:
  WorldParams params_;
  Rng rng_;
  SimClock clock_;
  Value256 contract_addr_;
  BitString enrolled_biometric_;
  Value256 hard_token_;
  std::unique_ptr<Ledger> ledger_;
  std::unique_ptr<Gateway> gw_;
  std::unique_ptr<UserDevice> ud_;
  std::unique_ptr<SensorNode> sn_;
};

}  // namespace pufauth
