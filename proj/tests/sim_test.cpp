#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pufauth/sim.hpp"

using namespace pufauth;

namespace {

WorldParams params_for(ProtocolVariant v, std::uint64_t seed = 0) {
  WorldParams p;
  p.variant = v;
  p.seed = seed;
  return p;
}

class DropMessage : public Adversary {
 public:
  explicit DropMessage(MsgTag tag) : tag_(tag) {}
  Tamper on_message(PartyId, PartyId, const Message& m) override {
    if (tag_of(m) == tag_) return {true, std::nullopt};
    return {};
  }

 private:
  MsgTag tag_;
};

class EventCounter : public Adversary {
 public:
  void on_event(const ChannelEvent& ev) override {
    ++events;
    if (!ev.payload.empty()) tags.push_back(static_cast<MsgTag>(ev.payload[0]));
  }
  int events = 0;
  std::vector<MsgTag> tags;
};

constexpr ProtocolVariant kAll[] = {ProtocolVariant::P21_AW, ProtocolVariant::P21_FIX,
                                    ProtocolVariant::P21_ENH, ProtocolVariant::P22,
                                    ProtocolVariant::P22_ENH};

}  // namespace

TEST_CASE("honest 2021 run: complete with five deliver events") {
  World w(params_for(ProtocolVariant::P21_FIX, 1));
  Trace t = run_session(w, nullptr);
  CHECK(t.outcome.complete);
  std::size_t delivers = 0;
  for (const auto& ev : t.events) delivers += ev.kind == EventKind::deliver;
  CHECK(delivers == 5);
  CHECK(t.deliver_count(MsgTag::ledger_tx) == 0);

  // events are sequenced strictly and times never move backwards
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    CHECK(t.events[i].seq == i);
    if (i > 0) CHECK(t.events[i].sim_time.millis >= t.events[i - 1].sim_time.millis);
  }
}

TEST_CASE("honest 2022 run: ledger round adds two transactions and two replies") {
  World w(params_for(ProtocolVariant::P22, 2));
  Trace t = run_session(w, nullptr);
  CHECK(t.outcome.complete);
  CHECK(t.deliver_count(MsgTag::ledger_tx) == 2);
  CHECK(t.deliver_count(MsgTag::ledger_reply) == 2);
  // genesis + 2 registrations + 2 session anchors
  CHECK(w.ledger().size() == 5);
  CHECK(w.ledger().verify_chain().valid);
}

TEST_CASE("dropping M3 times out the gateway") {
  World w(params_for(ProtocolVariant::P21_FIX, 3));
  DropMessage adv(MsgTag::m3);
  Trace t = run_session(w, &adv);
  CHECK_FALSE(t.outcome.complete);
  CHECK(t.outcome.step == Step::m3);
  CHECK(t.outcome.reason == RejectReason::timeout);
  bool saw_drop = false;
  for (const auto& ev : t.events) saw_drop = saw_drop || ev.kind == EventKind::drop;
  CHECK(saw_drop);
  // the timeout advanced the clock by the timeout constant
  CHECK(w.clock().now().millis >= kTimeoutMs);
}

TEST_CASE("adversary hooks never see registration traffic") {
  // registration happens at world construction, before any channel exists;
  // every event an adversary can observe is an authentication-phase message
  EventCounter adv;
  World w(params_for(ProtocolVariant::P22, 4));
  Trace t = run_session(w, &adv);
  REQUIRE(adv.events > 0);
  for (MsgTag tag : adv.tags) {
    CHECK(tag != MsgTag::reg_req);
    CHECK(tag != MsgTag::reg_challenge);
    CHECK(tag != MsgTag::reg_response);
    CHECK(tag != MsgTag::reg_issue);
  }
  CHECK(t.outcome.complete);
}

TEST_CASE("identical scenarios produce bit-identical traces") {
  for (ProtocolVariant v : kAll) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      World w1(params_for(v, seed));
      World w2(params_for(v, seed));
      Trace t1 = run_session(w1, nullptr);
      Trace t2 = run_session(w2, nullptr);
      CHECK(t1 == t2);
      CHECK(t1.to_text() == t2.to_text());
    }
  }
}

TEST_CASE("different seeds diverge at the first randomized payload") {
  World w1(params_for(ProtocolVariant::P21_FIX, 10));
  World w2(params_for(ProtocolVariant::P21_FIX, 11));
  Trace t1 = run_session(w1, nullptr);
  Trace t2 = run_session(w2, nullptr);
  CHECK(t1.events.size() == t2.events.size());
  CHECK(t1.events[0].payload != t2.events[0].payload);  // M1 carries beta/nonce
}

TEST_CASE("trace text round-trips losslessly, including multi-trace files") {
  World w1(params_for(ProtocolVariant::P22_ENH, 5));
  World w2(params_for(ProtocolVariant::P21_AW, 6));
  Trace t1 = run_session(w1, nullptr);
  Trace t2 = run_session(w2, nullptr);

  auto parsed1 = traces_from_text(t1.to_text());
  REQUIRE(parsed1.size() == 1);
  CHECK(parsed1[0] == t1);

  auto both = traces_from_text(t1.to_text() + t2.to_text());
  REQUIRE(both.size() == 2);
  CHECK(both[0] == t1);
  CHECK(both[1] == t2);
  CHECK(both[1].outcome.text() == "rejected:m3:user-auth");
}

TEST_CASE("replay_trace reproduces a recorded run and flags divergence") {
  World w(params_for(ProtocolVariant::P21_ENH, 7));
  Trace recorded = run_session(w, nullptr);

  World fresh(params_for(ProtocolVariant::P21_ENH, 7));
  Trace again = replay_trace(recorded, fresh, nullptr);
  CHECK(again == recorded);

  // a mutated world snapshot (wrong seed) must be detected
  World mutated(params_for(ProtocolVariant::P21_ENH, 8));
  CHECK_THROWS_AS(replay_trace(recorded, mutated, nullptr), DeterminismViolation);
}

TEST_CASE("outcome text parses back") {
  Outcome c{true};
  CHECK(Outcome::parse(c.text()) == c);
  Outcome r{false, Step::m4, RejectReason::identity_tamper};
  CHECK(r.text() == "rejected:m4:identity-tamper");
  CHECK(Outcome::parse(r.text()) == r);
}
