#include "pufauth/world.hpp"

namespace pufauth {

World::World(const WorldParams& params) : params_(params), rng_(params.seed) {
  if (params_.pool_size < 1) throw Error("pool_size must be >= 1");
  const ProtocolConfig cfg = params_.protocol_config();
  contract_addr_ = HashInput().add("pufauth.contract.v1").digest();

  const Value256 id_u = rng_.value256();
  const Value256 ud_puf_secret = rng_.value256();
  hard_token_ = rng_.value256();
  enrolled_biometric_ = rng_.bits(cfg.fuzzy.biometric_len());

  const Value256 id_sn = rng_.value256();
  const Value256 sn_puf_secret = rng_.value256();

  ledger_ = std::make_unique<Ledger>();
  gw_ = std::make_unique<Gateway>(cfg, ledger_.get(), contract_addr_);
  ud_ = std::make_unique<UserDevice>(cfg, id_u, ud_puf_secret);
  sn_ = std::make_unique<SensorNode>(cfg, id_sn, sn_puf_secret);

  register_user(*gw_, *ud_, enrolled_biometric_, hard_token_, params_.pool_size - 1, rng_, clock_,
                params_.ku_equals_ru);
  register_sensor(*gw_, *sn_, params_.pool_size - 1, rng_, clock_);

  presented_biometric = enrolled_biometric_;
  presented_token = hard_token_;
}

}  // namespace pufauth
