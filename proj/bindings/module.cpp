#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "pufauth/scenario.hpp"

namespace py = pybind11;
using namespace pufauth;

namespace {

Value256 value_from_bytes(const py::bytes& b) {
  std::string s = b;
  if (s.size() != 32) throw Error("expected exactly 32 bytes");
  Value256 v;
  std::copy(s.begin(), s.end(), reinterpret_cast<char*>(v.bytes.data()));
  return v;
}

py::bytes value_to_bytes(const Value256& v) {
  return py::bytes(reinterpret_cast<const char*>(v.bytes.data()), v.bytes.size());
}

ScenarioConfig make_config(const std::string& variant, std::uint64_t seed,
                           const std::string& attack, std::uint32_t pool_size,
                           std::uint64_t delta_ms, std::uint32_t fuzzy_k, std::uint32_t fuzzy_r,
                           std::uint32_t trials) {
  ScenarioConfig cfg;
  cfg.variant = variant_from_name(variant);
  if (!attack.empty()) cfg.attack = attack_from_name(attack);
  cfg.seed = seed;
  cfg.pool_size = pool_size;
  cfg.delta_ms = delta_ms;
  cfg.fuzzy = FuzzyParams(fuzzy_k, fuzzy_r);
  cfg.trials = trials;
  return cfg;
}

std::string session_json(const std::string& variant, std::uint64_t seed, std::uint32_t pool_size,
                         std::uint64_t delta_ms, std::uint32_t fuzzy_k, std::uint32_t fuzzy_r,
                         bool ku_equals_ru, bool with_trace) {
  ScenarioConfig cfg = make_config(variant, seed, "", pool_size, delta_ms, fuzzy_k, fuzzy_r, 1);
  WorldParams params = world_params_for(cfg);
  params.ku_equals_ru = ku_equals_ru;
  World world(params);
  Trace t = run_session(world, nullptr);

  nlohmann::ordered_json j;
  j["variant"] = variant;
  j["seed"] = seed;
  j["outcome"] = t.outcome.text();
  j["complete"] = t.outcome.complete;
  if (world.ud().session_key()) j["ud_session_key"] = world.ud().session_key()->hex();
  const auto& users = world.gw().user_records();
  if (!users.empty() && users.front().sk_u) j["gw_user_session_key"] = users.front().sk_u->hex();
  const auto& sensors = world.gw().sensor_records();
  if (!sensors.empty() && sensors.front().sk_sn)
    j["gw_sensor_session_key"] = sensors.front().sk_sn->hex();
  if (world.sn().session_key()) j["sn_session_key"] = world.sn().session_key()->hex();
  j["deliver_events"] = t.events.size();
  if (with_trace) j["trace"] = t.to_text();
  return j.dump();
}

std::string attack_json(const std::string& variant, const std::string& attack, std::uint64_t seed,
                        std::uint32_t pool_size, std::uint64_t delta_ms, std::uint32_t fuzzy_k,
                        std::uint32_t fuzzy_r, std::uint32_t trials) {
  ScenarioConfig cfg =
      make_config(variant, seed, attack, pool_size, delta_ms, fuzzy_k, fuzzy_r, trials);
  AttackOutcome out = run_attack(cfg);

  nlohmann::ordered_json j;
  j["attack"] = attack_name(out.attack);
  j["variant"] = variant_name(out.variant);
  j["succeeded"] = out.succeeded;
  j["expected"] = expected_attack_success(out.attack, out.variant);
  nlohmann::ordered_json ev;
  ev["trials"] = out.evidence.trials;
  ev["hits"] = out.evidence.hits;
  if (out.evidence.recovered_key) ev["recovered_key"] = out.evidence.recovered_key->hex();
  if (out.evidence.session1) ev["session1"] = *out.evidence.session1;
  if (out.evidence.session2) ev["session2"] = *out.evidence.session2;
  if (out.evidence.identity_preserved) ev["identity_preserved"] = *out.evidence.identity_preserved;
  if (out.evidence.desync) ev["desync"] = *out.evidence.desync;
  if (out.evidence.replay_accepted) ev["replay_accepted"] = *out.evidence.replay_accepted;
  if (out.evidence.detail) ev["detail"] = *out.evidence.detail;
  j["evidence"] = ev;
  return j.dump();
}

std::string matrix_json(std::uint32_t seeds, std::uint64_t base_seed, std::uint32_t trials,
                        std::uint32_t pool_size, std::uint64_t delta_ms) {
  ScenarioConfig cfg;
  cfg.seed = base_seed;
  cfg.trials = trials;
  cfg.pool_size = pool_size;
  cfg.delta_ms = delta_ms;
  MatrixResult m = run_matrix(cfg, seeds);
  return m.report_json;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "PUF-based IoT authentication workbench (C++ core)";

  m.def(
      "sha256",
      [](const py::bytes& data) {
        std::string s = data;
        return value_to_bytes(
            sha256(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())));
      },
      py::arg("data"), "SHA-256 digest of raw bytes");

  m.def(
      "hash_concat",
      [](const std::vector<py::bytes>& parts) {
        HashInput in;
        std::vector<std::string> keep;
        keep.reserve(parts.size());
        for (const auto& p : parts) keep.push_back(p);
        for (const auto& s : keep)
          in.add(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        return value_to_bytes(in.digest());
      },
      py::arg("parts"), "length-prefixed multi-operand hash h(a||b||...)");

  m.def(
      "xor256",
      [](const py::bytes& a, const py::bytes& b) {
        return value_to_bytes(value_from_bytes(a) ^ value_from_bytes(b));
      },
      py::arg("a"), py::arg("b"));

  py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>(), py::arg("seed"));

  py::class_<PufDevice>(m, "PufDevice")
      .def(py::init([](const py::bytes& secret) { return PufDevice(value_from_bytes(secret)); }),
           py::arg("device_secret"))
      .def(
          "eval",
          [](const PufDevice& d, const py::bytes& challenge) {
            return value_to_bytes(d.eval(value_from_bytes(challenge)));
          },
          py::arg("challenge"));

  m.def(
      "fe_gen",
      [](const std::string& biometric, std::uint32_t k, std::uint32_t r, Rng& rng) {
        FuzzySketch sk = fe_gen(BitString::from_string(biometric), FuzzyParams(k, r), rng);
        return py::make_tuple(sk.s1.to_string(), sk.s2.to_string());
      },
      py::arg("biometric"), py::arg("k"), py::arg("r"), py::arg("rng"),
      "Gen(B_m) -> (S_1, S_2), bit strings as '0'/'1' text");

  m.def(
      "fe_rep",
      [](const std::string& biometric, const std::string& s2, std::uint32_t k, std::uint32_t r) {
        return fe_rep(BitString::from_string(biometric), BitString::from_string(s2),
                      FuzzyParams(k, r))
            .to_string();
      },
      py::arg("biometric"), py::arg("s2"), py::arg("k"), py::arg("r"));

  m.def(
      "perturb_biometric",
      [](const std::string& biometric, std::size_t flips, Rng& rng) {
        return perturb_biometric(BitString::from_string(biometric), flips, rng).to_string();
      },
      py::arg("biometric"), py::arg("flips"), py::arg("rng"));

  m.def("variants", [] {
    return std::vector<std::string>{"p21-aw", "p21-fix", "p21-enh", "p22", "p22-enh"};
  });
  m.def("attacks", [] {
    return std::vector<std::string>{"a1-biometric", "a2-plaintext-sk", "a3-identity-mod",
                                    "a4-replay"};
  });

  m.def("run_session_json", &session_json, py::arg("variant"), py::arg("seed") = 0,
        py::arg("pool_size") = 8, py::arg("delta_ms") = 2000, py::arg("fuzzy_k") = 32,
        py::arg("fuzzy_r") = 5, py::arg("ku_equals_ru") = false, py::arg("with_trace") = false,
        "one honest session; JSON string with outcome and session keys");

  m.def("run_attack_json", &attack_json, py::arg("variant"), py::arg("attack"),
        py::arg("seed") = 0, py::arg("pool_size") = 8, py::arg("delta_ms") = 2000,
        py::arg("fuzzy_k") = 32, py::arg("fuzzy_r") = 5, py::arg("trials") = 100,
        "one attack scenario; JSON string with verdict and evidence");

  m.def("run_matrix_json", &matrix_json, py::arg("seeds") = 20, py::arg("base_seed") = 0,
        py::arg("trials") = 100, py::arg("pool_size") = 8, py::arg("delta_ms") = 2000,
        "full attack x variant matrix report as a JSON string");
}
