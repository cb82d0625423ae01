#pragma once

#include <optional>
#include <string>

#include "pufauth/attacks.hpp"

namespace pufauth {

struct ScenarioConfig {
  ProtocolVariant variant = ProtocolVariant::P21_FIX;
  std::optional<AttackId> attack;
  std::uint64_t seed = 0;
  FuzzyParams fuzzy{32, 5};
  std::uint64_t delta_ms = 2000;
  std::uint32_t pool_size = 8;
  std::uint32_t trials = 100;
  std::string out_path;
  bool disable_identity_verify = false;
};

/// World parameters for one run. The plaintext-key provisioning (K_u := R_u)
/// is applied for every attack on the as-written 2021 variant: it is the one
/// configuration in which that variant's sessions complete, so the scripted
/// scenarios have live sessions to subvert.
WorldParams world_params_for(const ScenarioConfig& cfg);

/// Runs the configured attack against a fresh world. Per-attack defaults:
/// a1 flips one bit per login trial; a3 tampers the user update at a
/// seed-derived bit position; a4 picks the replay mode(s) the variant's
/// freshness rule must face (one baseline mode, all three enhanced modes,
/// success = any replay accepted).
AttackOutcome run_attack(const ScenarioConfig& cfg);

struct ScenarioResult {
  Outcome honest_outcome;                 // honest run (no attack configured)
  std::optional<AttackOutcome> attack;    // attack run
  std::vector<Trace> traces;
  bool expected = false;                  // outcome matches this variant's expectation
  std::string summary;                    // one-line human summary
};

/// Executes one scenario: an honest session, or one attack. `expected` is
/// true when the result matches the variant's known behaviour (honest
/// completion everywhere except the as-written 2021 variant, attack verdicts
/// per the expected matrix).
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Expected honest-run outcome per variant: complete everywhere except the
/// as-written 2021 variant, whose session dies at M3 with user-auth because
/// the device derives the wrong challenge.
Outcome expected_honest_outcome(ProtocolVariant v);

struct OpCountRow {
  OpCounters ops;
  bool complete = false;
};

/// Hash/xor/puf counts over one honest session (login through completion),
/// registration excluded.
OpCountRow count_honest_session(const WorldParams& params);

struct MatrixResult {
  bool all_match = false;
  std::vector<std::string> mismatches;
  std::string report_json;  // stable field order, parses back losslessly
};

/// Runs the full attack x variant matrix over `n_seeds` seeds (cells in
/// parallel), checks every cell against the expected matrix, and checks the
/// enhanced variants' op-count overhead (<= 3 extra hashes, 0 extra puf
/// evaluations per session).
MatrixResult run_matrix(const ScenarioConfig& base, std::uint32_t n_seeds);

}  // namespace pufauth
