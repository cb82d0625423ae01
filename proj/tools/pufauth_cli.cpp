// Command-line front end: run one scenario (honest session or scripted
// attack) or the full attack/defense matrix, writing traces and a report.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pufauth/scenario.hpp"

namespace {

using namespace pufauth;

constexpr const char* kVariantNames[] = {"p21-aw", "p21-fix", "p21-enh", "p22", "p22-enh"};
constexpr const char* kAttackNames[] = {"a1-biometric", "a2-plaintext-sk", "a3-identity-mod",
                                        "a4-replay"};

struct CliOptions {
  std::string variant = "p21-fix";
  std::string attack;
  std::uint64_t seed = 0;
  std::string out;
  std::uint64_t delta_ms = 2000;
  std::uint32_t pool_size = 8;
  std::uint32_t fuzzy_k = 32;
  std::uint32_t fuzzy_r = 5;
  std::uint32_t trials = 100;
  std::uint32_t seeds = 20;
  bool debug_disable_identity_verify = false;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--variant", o.variant, "protocol variant")
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(kVariantNames),
                                                     std::end(kVariantNames))));
  cmd->add_option("--seed", o.seed, "deterministic scenario seed");
  cmd->add_option("--out", o.out, "output file path");
  cmd->add_option("--delta-ms", o.delta_ms, "enhanced freshness window (simulated ms)");
  cmd->add_option("--pool-size", o.pool_size, "challenge-response pairs enrolled per device")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fuzzy-k", o.fuzzy_k, "fuzzy extractor secret bits");
  cmd->add_option("--fuzzy-r", o.fuzzy_r, "fuzzy extractor repetition factor (odd)");
  cmd->add_option("--trials", o.trials, "per-attack trial count");
  cmd->add_flag("--debug-disable-identity-verify", o.debug_disable_identity_verify,
                "debug: skip identity-update verification in enhanced variants");
  cmd->set_config("--config")->configurable(false);
}

ScenarioConfig to_scenario_config(const CliOptions& o) {
  ScenarioConfig cfg;
  cfg.variant = variant_from_name(o.variant);
  if (!o.attack.empty()) cfg.attack = attack_from_name(o.attack);
  cfg.seed = o.seed;
  cfg.fuzzy = FuzzyParams(o.fuzzy_k, o.fuzzy_r);
  cfg.delta_ms = o.delta_ms;
  cfg.pool_size = o.pool_size;
  cfg.trials = o.trials;
  cfg.out_path = o.out;
  cfg.disable_identity_verify = o.debug_disable_identity_verify;
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

int cmd_run(const CliOptions& o) {
  ScenarioConfig cfg = to_scenario_config(o);
  if (cfg.out_path.empty()) cfg.out_path = "trace.txt";
  ScenarioResult res = run_scenario(cfg);

  std::string text;
  for (const Trace& t : res.traces) text += t.to_text();
  write_file(cfg.out_path, text);

  std::cout << res.summary << "\n";
  if (res.attack) {
    const auto& ev = res.attack->evidence;
    if (ev.detail) std::cout << "  " << *ev.detail << "\n";
    if (ev.session1) std::cout << "  attacked session: " << *ev.session1 << "\n";
    if (ev.session2) std::cout << "  follow-up session: " << *ev.session2 << "\n";
  }
  std::cout << "trace written to " << cfg.out_path << "\n";
  if (!res.expected) {
    std::cout << "UNEXPECTED outcome for " << o.variant << "\n";
    return 2;
  }
  return 0;
}

int cmd_matrix(const CliOptions& o) {
  ScenarioConfig cfg = to_scenario_config(o);
  if (cfg.out_path.empty()) cfg.out_path = "report.json";
  MatrixResult m = run_matrix(cfg, o.seeds);
  write_file(cfg.out_path, m.report_json);
  std::cout << "report written to " << cfg.out_path << "\n";
  if (!m.all_match) {
    std::cout << "matrix diverged from the expected attack/defense table:\n";
    for (const auto& d : m.mismatches) std::cout << "  " << d << "\n";
    return 2;
  }
  std::cout << "matrix matches the expected attack/defense table ("
            << o.seeds << " seeds per cell)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PUF-based IoT authentication workbench: protocol simulation and attack scenarios"};
  app.require_subcommand(1);

  CliOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "run one scenario and write its trace");
  add_common_options(run, run_opts);
  run->add_option("--attack", run_opts.attack, "attack scenario to execute")
      ->check(CLI::IsMember(
          std::vector<std::string>(std::begin(kAttackNames), std::end(kAttackNames))));

  CliOptions matrix_opts;
  CLI::App* matrix =
      app.add_subcommand("matrix", "run the attack x variant matrix and write the report");
  add_common_options(matrix, matrix_opts);
  matrix->add_option("--seeds", matrix_opts.seeds, "seeds per matrix cell")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags/config are a usage error
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (matrix->parsed()) return cmd_matrix(matrix_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
