#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pufauth/scenario.hpp"

using namespace pufauth;

namespace {

WorldParams params_for(ProtocolVariant v, std::uint64_t seed = 0, bool fixture = false) {
  WorldParams p;
  p.variant = v;
  p.seed = seed;
  p.ku_equals_ru = fixture;
  return p;
}

}  // namespace

TEST_CASE("a1: one bit of biometric noise breaks every baseline login") {
  World w(params_for(ProtocolVariant::P21_FIX, 1));
  AttackOutcome out = attack_biometric_noise(w, 1, 100);
  CHECK(out.succeeded);
  CHECK(out.evidence.trials == 100);
  CHECK(out.evidence.hits == 100);
  REQUIRE(out.evidence.session1.has_value());
  CHECK(*out.evidence.session1 == "rejected:login:login");
}

TEST_CASE("a1: fuzzy-extractor variants absorb the same noise") {
  for (ProtocolVariant v :
       {ProtocolVariant::P21_ENH, ProtocolVariant::P22, ProtocolVariant::P22_ENH}) {
    World w(params_for(v, 2));
    AttackOutcome out = attack_biometric_noise(w, 1, 100);
    CHECK_FALSE(out.succeeded);
    CHECK(out.evidence.hits == 0);
    CHECK(*out.evidence.session1 == "complete");
  }
}

TEST_CASE("a1: zero flips is the identity case") {
  World w(params_for(ProtocolVariant::P21_FIX, 3));
  AttackOutcome out = attack_biometric_noise(w, 0, 50);
  CHECK_FALSE(out.succeeded);
}

TEST_CASE("a2: as-written 2021 with K_u = R_u leaks the session key in M3") {
  World w(params_for(ProtocolVariant::P21_AW, 4, /*fixture=*/true));
  AttackOutcome out = attack_plaintext_sk(w);
  CHECK(out.succeeded);
  REQUIRE(out.evidence.recovered_key.has_value());
  CHECK(*out.evidence.recovered_key == *w.gw().user_records().front().sk_u);
  CHECK(*out.evidence.session1 == "complete");
}

TEST_CASE("a2: the repaired and enhanced variants mask the key") {
  for (ProtocolVariant v : {ProtocolVariant::P21_FIX, ProtocolVariant::P21_ENH,
                            ProtocolVariant::P22, ProtocolVariant::P22_ENH}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      World w(params_for(v, seed));
      AttackOutcome out = attack_plaintext_sk(w);
      CHECK_FALSE(out.succeeded);
      CHECK_FALSE(out.evidence.recovered_key.has_value());
    }
  }
}

TEST_CASE("a3: baseline identity tamper disrupts the next session") {
  for (auto [variant, fixture] :
       {std::pair{ProtocolVariant::P21_AW, true}, {ProtocolVariant::P21_FIX, false},
        {ProtocolVariant::P22, false}}) {
    World w(params_for(variant, 5, fixture));
    AttackOutcome out = attack_identity_modification(w, TamperTarget::user, 0);
    CHECK(out.succeeded);
    CHECK(*out.evidence.session1 == "complete");
    CHECK(*out.evidence.session2 == "rejected:m1:unknown-identity");
    CHECK(*out.evidence.desync);
  }
}

TEST_CASE("a3: baseline sensor-side tamper disrupts the next session at M3") {
  World w(params_for(ProtocolVariant::P21_FIX, 6));
  AttackOutcome out = attack_identity_modification(w, TamperTarget::sensor, 17);
  CHECK(out.succeeded);
  CHECK(*out.evidence.session1 == "complete");
  CHECK(*out.evidence.session2 == "rejected:m3:unknown-identity");
}

TEST_CASE("a3: enhanced variants reject the tamper in-session and recover") {
  for (ProtocolVariant v : {ProtocolVariant::P21_ENH, ProtocolVariant::P22_ENH}) {
    for (TamperTarget target : {TamperTarget::user, TamperTarget::sensor}) {
      World w(params_for(v, 7));
      AttackOutcome out = attack_identity_modification(w, target, 42);
      CHECK_FALSE(out.succeeded);
      const char* expect =
          target == TamperTarget::user ? "rejected:m2:identity-tamper" : "rejected:m4:identity-tamper";
      CHECK(*out.evidence.session1 == expect);
      CHECK(*out.evidence.identity_preserved);
      CHECK(*out.evidence.session2 == "complete");
    }
  }
}

TEST_CASE("a3: the debug knob re-opens the hole in enhanced variants") {
  WorldParams p = params_for(ProtocolVariant::P21_ENH, 8);
  p.disable_identity_verify = true;
  World w(p);
  AttackOutcome out = attack_identity_modification(w, TamperTarget::user, 3);
  CHECK(out.succeeded);
}

TEST_CASE("a4: baseline gateway accepts a replayed M1 with a substituted nonce") {
  for (auto [variant, fixture] :
       {std::pair{ProtocolVariant::P21_AW, true}, {ProtocolVariant::P21_FIX, false},
        {ProtocolVariant::P22, false}}) {
    World w(params_for(variant, 9, fixture));
    AttackOutcome out = attack_replay(w, ReplayMode::fresh_nonce);
    CHECK(out.succeeded);
    CHECK(*out.evidence.replay_accepted);
    // the live session dies against the overwritten key, and the user's
    // rotated identity no longer resolves
    CHECK(*out.evidence.session1 == "rejected:m3:user-auth");
    CHECK(*out.evidence.session2 == "rejected:m1:unknown-identity");
    CHECK(*out.evidence.desync);
  }
}

TEST_CASE("a4: enhanced freshness rejects all three replay shapes") {
  for (ProtocolVariant v : {ProtocolVariant::P21_ENH, ProtocolVariant::P22_ENH}) {
    for (ReplayMode mode : {ReplayMode::unchanged_duplicate, ReplayMode::unchanged_stale,
                            ReplayMode::rewritten_ts}) {
      World w(params_for(v, 10));
      AttackOutcome out = attack_replay(w, mode);
      CHECK_FALSE(out.succeeded);
      CHECK_FALSE(*out.evidence.replay_accepted);
      REQUIRE(out.evidence.detail.has_value());
      CHECK(out.evidence.detail->find("replay rejected: replay") != std::string::npos);
      // the legitimate parties stay in sync
      CHECK(*out.evidence.session2 == "complete");
    }
  }
}

TEST_CASE("expected attack/defense matrix") {
  using enum ProtocolVariant;
  auto expect = [](AttackId a, std::initializer_list<bool> cells) {
    const ProtocolVariant vs[] = {P21_AW, P21_FIX, P21_ENH, P22, P22_ENH};
    std::size_t i = 0;
    for (bool cell : cells) CHECK(expected_attack_success(a, vs[i++]) == cell);
  };
  expect(AttackId::a1_biometric, {true, true, false, false, false});
  expect(AttackId::a2_plaintext_sk, {true, false, false, false, false});
  expect(AttackId::a3_identity_mod, {true, true, false, true, false});
  expect(AttackId::a4_replay, {true, true, false, true, false});
}

TEST_CASE("run_attack applies per-attack defaults and matches expectations") {
  for (AttackId attack : {AttackId::a1_biometric, AttackId::a2_plaintext_sk,
                          AttackId::a3_identity_mod, AttackId::a4_replay}) {
    for (ProtocolVariant variant :
         {ProtocolVariant::P21_AW, ProtocolVariant::P21_FIX, ProtocolVariant::P21_ENH,
          ProtocolVariant::P22, ProtocolVariant::P22_ENH}) {
      ScenarioConfig cfg;
      cfg.variant = variant;
      cfg.attack = attack;
      cfg.seed = 11;
      cfg.trials = 20;
      AttackOutcome out = run_attack(cfg);
      CHECK(out.succeeded == expected_attack_success(attack, variant));
      CHECK_FALSE(out.evidence.empty());
    }
  }
}

TEST_CASE("mini matrix run agrees with the expected table and stays in budget") {
  ScenarioConfig cfg;
  cfg.trials = 10;
  MatrixResult m = run_matrix(cfg, 2);
  CHECK(m.all_match);
  CHECK(m.mismatches.empty());
  CHECK(m.report_json.find("\"op_count_deltas\"") != std::string::npos);
}

TEST_CASE("matrix flags a mutation: identity verification disabled") {
  ScenarioConfig cfg;
  cfg.trials = 5;
  cfg.disable_identity_verify = true;
  MatrixResult m = run_matrix(cfg, 1);
  CHECK_FALSE(m.all_match);
  bool a3_flip = false;
  for (const auto& d : m.mismatches)
    a3_flip = a3_flip || d.find("a3-identity-mod") != std::string::npos;
  CHECK(a3_flip);
}
