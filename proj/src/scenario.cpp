#include "pufauth/scenario.hpp"

#include <array>
#include <future>

#include <json.hpp>

namespace pufauth {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson evidence_json(const AttackEvidence& ev) {
  OrderedJson j;
  j["trials"] = ev.trials;
  j["hits"] = ev.hits;
  if (ev.recovered_key) j["recovered_key"] = ev.recovered_key->hex();
  if (ev.session1) j["session1"] = *ev.session1;
  if (ev.session2) j["session2"] = *ev.session2;
  if (ev.identity_preserved) j["identity_preserved"] = *ev.identity_preserved;
  if (ev.desync) j["desync"] = *ev.desync;
  if (ev.replay_accepted) j["replay_accepted"] = *ev.replay_accepted;
  if (ev.detail) j["detail"] = *ev.detail;
  return j;
}

constexpr std::array<ProtocolVariant, 5> kAllVariants = {
    ProtocolVariant::P21_AW, ProtocolVariant::P21_FIX, ProtocolVariant::P21_ENH,
    ProtocolVariant::P22, ProtocolVariant::P22_ENH};

constexpr std::array<AttackId, 4> kAllAttacks = {AttackId::a1_biometric, AttackId::a2_plaintext_sk,
                                                 AttackId::a3_identity_mod, AttackId::a4_replay};

}  // namespace

WorldParams world_params_for(const ScenarioConfig& cfg) {
  WorldParams p;
  p.variant = cfg.variant;
  p.seed = cfg.seed;
  p.fuzzy = cfg.fuzzy;
  p.pool_size = cfg.pool_size;
  p.delta_ms = cfg.delta_ms;
  p.disable_identity_verify = cfg.disable_identity_verify;
  p.ku_equals_ru = cfg.attack.has_value() && cfg.variant == ProtocolVariant::P21_AW;
  return p;
}

AttackOutcome run_attack(const ScenarioConfig& cfg) {
  if (!cfg.attack) throw Error("run_attack: no attack configured");
  World world(world_params_for(cfg));
  switch (*cfg.attack) {
    case AttackId::a1_biometric:
      return attack_biometric_noise(world, 1, cfg.trials);
    case AttackId::a2_plaintext_sk:
      return attack_plaintext_sk(world);
    case AttackId::a3_identity_mod:
      return attack_identity_modification(world, TamperTarget::user,
                                          static_cast<std::uint32_t>(cfg.seed % 256));
    case AttackId::a4_replay: {
      if (!is_enhanced(cfg.variant)) return attack_replay(world, ReplayMode::fresh_nonce);
      // hardened freshness faces all three replay shapes; any acceptance is
      // an attack success
      AttackOutcome agg;
      bool first = true;
      for (ReplayMode mode : {ReplayMode::unchanged_duplicate, ReplayMode::unchanged_stale,
                              ReplayMode::rewritten_ts}) {
        World fresh(world_params_for(cfg));
        AttackOutcome one = attack_replay(fresh, mode);
        if (first) {
          agg = std::move(one);
          first = false;
        } else {
          agg.succeeded = agg.succeeded || one.succeeded;
          agg.evidence.replay_accepted =
              agg.evidence.replay_accepted.value_or(false) || one.evidence.replay_accepted.value_or(false);
          if (one.evidence.detail)
            *agg.evidence.detail += " | " + *one.evidence.detail;
          for (auto& t : one.traces) agg.traces.push_back(std::move(t));
        }
      }
      return agg;
    }
  }
  throw Error("unreachable attack id");
}

Outcome expected_honest_outcome(ProtocolVariant v) {
  if (v == ProtocolVariant::P21_AW) return {false, Step::m3, RejectReason::user_auth};
  return {true};
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  ScenarioResult res;
  if (!cfg.attack) {
    World world(world_params_for(cfg));
    Trace t = run_session(world, nullptr);
    res.honest_outcome = t.outcome;
    res.expected = t.outcome == expected_honest_outcome(cfg.variant);
    res.summary = "honest " + variant_name(cfg.variant) + " seed " + std::to_string(cfg.seed) +
                  " -> " + t.outcome.text();
    res.traces.push_back(std::move(t));
    return res;
  }
  AttackOutcome out = run_attack(cfg);
  res.expected = out.succeeded == expected_attack_success(*cfg.attack, cfg.variant);
  res.summary = attack_name(*cfg.attack) + " vs " + variant_name(cfg.variant) + " -> " +
                (out.succeeded ? "succeeded" : "failed");
  res.traces = out.traces;
  res.attack = std::move(out);
  return res;
}

OpCountRow count_honest_session(const WorldParams& params) {
  World world(params);  // registration happens outside the counter scope
  OpCountRow row;
  CounterScope scope(row.ops);
  Trace t = run_session(world, nullptr);
  row.complete = t.outcome.complete;
  return row;
}

MatrixResult run_matrix(const ScenarioConfig& base, std::uint32_t n_seeds) {
  MatrixResult result;
  OrderedJson report;
  report["report"] = "attack-defense-matrix";
  report["seeds"] = n_seeds;
  report["base_seed"] = base.seed;
  OrderedJson cfg_json;
  cfg_json["delta_ms"] = base.delta_ms;
  cfg_json["pool_size"] = base.pool_size;
  cfg_json["fuzzy_k"] = base.fuzzy.k;
  cfg_json["fuzzy_r"] = base.fuzzy.r;
  cfg_json["trials"] = base.trials;
  cfg_json["disable_identity_verify"] = base.disable_identity_verify;
  report["config"] = cfg_json;

  struct Cell {
    AttackId attack;
    ProtocolVariant variant;
    bool expected = false;
    std::uint32_t agree = 0;
    bool observed = false;  // consensus verdict (first seed)
    AttackEvidence sample;
    std::vector<std::string> mismatches;
  };

  // each cell owns its worlds, rng and clock, so cells can run concurrently
  std::vector<std::future<Cell>> futures;
  for (AttackId attack : kAllAttacks) {
    for (ProtocolVariant variant : kAllVariants) {
      futures.push_back(std::async(std::launch::async, [=]() {
        Cell cell;
        cell.attack = attack;
        cell.variant = variant;
        cell.expected = expected_attack_success(attack, variant);
        for (std::uint32_t i = 0; i < n_seeds; ++i) {
          ScenarioConfig cfg = base;
          cfg.variant = variant;
          cfg.attack = attack;
          cfg.seed = base.seed + i;
          AttackOutcome out = run_attack(cfg);
          if (i == 0) {
            cell.observed = out.succeeded;
            cell.sample = out.evidence;
          }
          if (out.succeeded == cell.expected) {
            ++cell.agree;
          } else {
            cell.mismatches.push_back(attack_name(attack) + " vs " + variant_name(variant) +
                                      " seed " + std::to_string(cfg.seed) + ": got " +
                                      (out.succeeded ? "succeeded" : "failed") + ", expected " +
                                      (cell.expected ? "succeeded" : "failed"));
          }
        }
        return cell;
      }));
    }
  }

  OrderedJson matrix;
  for (auto& f : futures) {
    Cell cell = f.get();
    OrderedJson c;
    c["succeeded"] = cell.observed;
    c["expected"] = cell.expected;
    c["agree"] = cell.agree;
    c["evidence"] = evidence_json(cell.sample);
    matrix[attack_name(cell.attack)][variant_name(cell.variant)] = c;
    for (auto& m : cell.mismatches) result.mismatches.push_back(std::move(m));
  }
  report["matrix"] = matrix;

  // per-session operation counts, honest run per variant
  OrderedJson ops;
  OpCountRow rows[5];
  for (std::size_t i = 0; i < kAllVariants.size(); ++i) {
    ScenarioConfig cfg = base;
    cfg.variant = kAllVariants[i];
    cfg.attack.reset();
    rows[i] = count_honest_session(world_params_for(cfg));
    OrderedJson r;
    r["hash"] = rows[i].ops.hash;
    r["xor"] = rows[i].ops.xor_ops;
    r["puf"] = rows[i].ops.puf;
    r["complete"] = rows[i].complete;
    ops[variant_name(kAllVariants[i])] = r;
  }
  report["op_counts"] = ops;

  OrderedJson deltas;
  auto delta = [&](std::size_t enh, std::size_t baseline, const std::string& key) {
    OrderedJson d;
    const auto dh = static_cast<std::int64_t>(rows[enh].ops.hash) -
                    static_cast<std::int64_t>(rows[baseline].ops.hash);
    const auto dp = static_cast<std::int64_t>(rows[enh].ops.puf) -
                    static_cast<std::int64_t>(rows[baseline].ops.puf);
    d["hash"] = dh;
    d["puf"] = dp;
    deltas[key] = d;
    if (dh > 3 || dp != 0)
      result.mismatches.push_back("op-count overhead out of budget for " + key + ": hash +" +
                                  std::to_string(dh) + ", puf +" + std::to_string(dp));
  };
  delta(2, 1, "p21-enh vs p21-fix");  // indexes into kAllVariants
  delta(4, 3, "p22-enh vs p22");
  report["op_count_deltas"] = deltas;

  report["mismatches"] = result.mismatches;
  result.all_match = result.mismatches.empty();
  result.report_json = report.dump(2) + "\n";
  return result;
}

}  // namespace pufauth
