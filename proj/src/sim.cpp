#include "pufauth/sim.hpp"

#include <sstream>

namespace pufauth {

namespace {

PartyId addressee_of(const Message& m) {
  switch (tag_of(m)) {
    case MsgTag::m1:
    case MsgTag::m3:
    case MsgTag::m5:
    case MsgTag::ledger_reply:
      return PartyId::gw;
    case MsgTag::m2:
      return PartyId::ud;
    case MsgTag::m4:
      return PartyId::sn;
    case MsgTag::ledger_tx:
      return PartyId::bc;
    default:
      throw Error("registration message on the public channel");
  }
}

Step step_of_tag(MsgTag t) {
  switch (t) {
    case MsgTag::m1: return Step::m1;
    case MsgTag::m2: return Step::m2;
    case MsgTag::m3: return Step::m3;
    case MsgTag::m4: return Step::m4;
    case MsgTag::m5: return Step::m5;
    default: return Step::ledger;
  }
}

struct Driver {
  World& w;
  Adversary* adv = nullptr;
  Trace trace{};
  std::uint64_t seq = 0;

  void record(EventKind kind, PartyId from, PartyId to, std::vector<std::uint8_t> payload) {
    ChannelEvent ev;
    ev.seq = seq++;
    ev.kind = kind;
    ev.from = from;
    ev.to = to;
    ev.payload = std::move(payload);
    ev.sim_time = w.clock().now();
    trace.events.push_back(ev);
    if (adv) adv->on_event(trace.events.back());
  }

  StepOut dispatch(PartyId to, const Message& m) {
    switch (to) {
      case PartyId::gw:
        if (const auto* m1 = std::get_if<M1>(&m)) return w.gw().handle_m1(*m1, w.rng(), w.clock());
        if (const auto* m3 = std::get_if<M3>(&m)) return w.gw().handle_m3(*m3, w.rng(), w.clock());
        if (const auto* m5 = std::get_if<M5>(&m)) return w.gw().handle_m5(*m5, w.clock());
        if (const auto* lr = std::get_if<LedgerReply>(&m))
          return w.gw().handle_ledger_reply(*lr, w.clock());
        break;
      case PartyId::ud:
        if (const auto* m2 = std::get_if<M2>(&m)) return w.ud().handle_m2(*m2, w.rng(), w.clock());
        break;
      case PartyId::sn:
        if (const auto* m4 = std::get_if<M4>(&m)) return w.sn().handle_m4(*m4, w.rng(), w.clock());
        break;
      case PartyId::bc:
        if (const auto* tx = std::get_if<LedgerTx>(&m)) {
          auto res = w.ledger().submit_tx(tx->g, tx->contract_addr, w.clock(), w.rng());
          StepOut out;
          out.out = LedgerReply{res.ok};
          return out;
        }
        break;
      default:
        break;
    }
    StepOut out;
    out.reject = Reject{step_of_tag(tag_of(m)), RejectReason::protocol_order};
    return out;
  }

  // Adversary injections land while other traffic is in flight; each one is
  // delivered, handled, and its response chain followed, without aborting
  // the main flow.
  void pump(std::uint64_t horizon_ms) {
    if (!adv) return;
    for (auto due = adv->take_due(horizon_ms); !due.empty(); due = adv->take_due(horizon_ms)) {
      for (const Injection& inj : due) {
        w.clock().advance_to(inj.at_ms);
        auto bytes = serialize(inj.msg);
        record(EventKind::inject, PartyId::adv, inj.to, bytes);
        record(EventKind::deliver, PartyId::adv, inj.to, bytes);
        StepOut r = dispatch(inj.to, inj.msg);
        adv->on_injection_result(inj.msg, r);
        follow(r);
      }
    }
  }

  void follow(StepOut r) {
    while (r.out) {
      const Message m = *r.out;
      PartyId to = addressee_of(m);
      auto delivered = transmit(peer_of(to, m), to, m);
      if (!delivered) return;
      r = dispatch(to, *delivered);
    }
  }

  static PartyId peer_of(PartyId to, const Message& m) {
    switch (tag_of(m)) {
      case MsgTag::m1:
      case MsgTag::m3: return PartyId::ud;
      case MsgTag::m2:
      case MsgTag::m4:
      case MsgTag::ledger_tx: return PartyId::gw;
      case MsgTag::m5: return PartyId::sn;
      case MsgTag::ledger_reply: return PartyId::bc;
      default: return to;
    }
  }

  std::optional<Message> transmit(PartyId from, PartyId to, const Message& m) {
    if (is_registration(m))
      throw std::logic_error("secure-channel registration message reached the public channel");
    pump(w.clock().now().millis + kHopMs);
    Message current = m;
    auto bytes = serialize(current);
    w.clock().advance(kHopMs / 2);
    record(EventKind::send, from, to, bytes);
    if (adv) {
      auto t = adv->on_message(from, to, current);
      if (t.drop) {
        record(EventKind::drop, from, to, bytes);
        return std::nullopt;
      }
      if (t.replace) {
        current = *t.replace;
        bytes = serialize(current);
        record(EventKind::tamper, from, to, bytes);
      }
    }
    w.clock().advance(kHopMs / 2);
    record(EventKind::deliver, from, to, bytes);
    return current;
  }

  StepOut hop_and_handle(PartyId from, PartyId to, const Message& m, Step step) {
    auto delivered = transmit(from, to, m);
    if (!delivered) {
      const std::uint64_t waited_from = w.clock().now().millis;
      pump(waited_from + kTimeoutMs);
      w.clock().advance_to(waited_from + kTimeoutMs);
      StepOut out;
      out.reject = Reject{step, RejectReason::timeout};
      return out;
    }
    StepOut r = dispatch(to, *delivered);
    pump(w.clock().now().millis);
    return r;
  }

  Outcome run() {
    if (!w.ud().login(w.presented_biometric, w.presented_token))
      return {false, Step::login, RejectReason::login_failed};

    const Message m1 = w.ud().auth_init(w.sn().beta(), w.rng(), w.clock());
    StepOut r = hop_and_handle(PartyId::ud, PartyId::gw, m1, Step::m1);
    if (!r.ok()) return {false, r.reject->at, r.reject->reason};

    r = hop_and_handle(PartyId::gw, PartyId::ud, *r.out, Step::m2);
    if (!r.ok()) return {false, r.reject->at, r.reject->reason};

    r = hop_and_handle(PartyId::ud, PartyId::gw, *r.out, Step::m3);
    if (!r.ok()) return {false, r.reject->at, r.reject->reason};

    r = hop_and_handle(PartyId::gw, PartyId::sn, *r.out, Step::m4);
    if (!r.ok()) return {false, r.reject->at, r.reject->reason};

    r = hop_and_handle(PartyId::sn, PartyId::gw, *r.out, Step::m5);
    if (!r.ok()) return {false, r.reject->at, r.reject->reason};
    if (r.complete) return {true};

    // 2022 variants: anchor G_1 and G_2, each acknowledged by the ledger
    for (const Message& tx : r.ledger_txs) {
      StepOut rb = hop_and_handle(PartyId::gw, PartyId::bc, tx, Step::ledger);
      if (!rb.ok()) return {false, rb.reject->at, rb.reject->reason};
      StepOut rr = hop_and_handle(PartyId::bc, PartyId::gw, *rb.out, Step::ledger);
      if (!rr.ok()) return {false, rr.reject->at, rr.reject->reason};
      if (rr.complete) return {true};
    }
    return {false, Step::ledger, RejectReason::protocol_order};
  }
};

}  // namespace

const char* party_name(PartyId p) {
  switch (p) {
    case PartyId::ud: return "UD";
    case PartyId::gw: return "GW";
    case PartyId::sn: return "SN";
    case PartyId::bc: return "BC";
    case PartyId::adv: return "ADV";
  }
  return "?";
}

PartyId party_from_name(std::string_view name) {
  for (PartyId p : {PartyId::ud, PartyId::gw, PartyId::sn, PartyId::bc, PartyId::adv})
    if (name == party_name(p)) return p;
  throw Error("unknown party: " + std::string(name));
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::send: return "send";
    case EventKind::deliver: return "deliver";
    case EventKind::tamper: return "tamper";
    case EventKind::drop: return "drop";
    case EventKind::inject: return "inject";
  }
  return "?";
}

EventKind event_kind_from_name(std::string_view name) {
  for (EventKind k : {EventKind::send, EventKind::deliver, EventKind::tamper, EventKind::drop,
                      EventKind::inject})
    if (name == event_kind_name(k)) return k;
  throw Error("unknown event kind: " + std::string(name));
}

std::string Outcome::text() const {
  if (complete) return "complete";
  return std::string("rejected:") + step_name(step) + ":" + reject_reason_name(reason);
}

Outcome Outcome::parse(std::string_view text) {
  if (text == "complete") return {true};
  if (!text.starts_with("rejected:")) throw Error("bad outcome: " + std::string(text));
  auto rest = text.substr(9);
  auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw Error("bad outcome: " + std::string(text));
  Outcome o;
  o.complete = false;
  o.step = step_from_name(rest.substr(0, colon));
  o.reason = reject_reason_from_name(rest.substr(colon + 1));
  return o;
}

std::size_t Trace::deliver_count(MsgTag tag) const {
  std::size_t n = 0;
  for (const auto& ev : events)
    if (ev.kind == EventKind::deliver && !ev.payload.empty() &&
        ev.payload[0] == static_cast<std::uint8_t>(tag))
      ++n;
  return n;
}

std::string Trace::to_text() const {
  std::ostringstream out;
  out << "trace v1 variant=" << variant_name(variant) << " seed=" << rng_seed
      << " outcome=" << outcome.text() << "\n";
  for (const auto& ev : events) {
    out << ev.seq << " " << event_kind_name(ev.kind) << " " << party_name(ev.from) << " "
        << party_name(ev.to) << " " << (ev.payload.empty() ? "-" : to_hex(ev.payload)) << " "
        << ev.sim_time.millis << "\n";
  }
  return out.str();
}

std::vector<Trace> traces_from_text(std::string_view text) {
  std::vector<Trace> out;
  std::istringstream in{std::string(text)};
  std::string line;
  Trace* current = nullptr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.starts_with("trace v1 ")) {
      Trace t;
      std::istringstream hdr(line.substr(9));
      std::string field;
      while (hdr >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw Error("bad trace header field: " + field);
        auto key = field.substr(0, eq);
        auto val = field.substr(eq + 1);
        if (key == "variant") {
          t.variant = variant_from_name(val);
        } else if (key == "seed") {
          t.rng_seed = std::stoull(val);
        } else if (key == "outcome") {
          t.outcome = Outcome::parse(val);
        } else {
          throw Error("unknown trace header key: " + key);
        }
      }
      out.push_back(std::move(t));
      current = &out.back();
      continue;
    }
    if (!current) throw Error("trace event before header");
    std::istringstream ev_in(line);
    ChannelEvent ev;
    std::string kind, from, to, payload;
    std::uint64_t ms = 0;
    if (!(ev_in >> ev.seq >> kind >> from >> to >> payload >> ms))
      throw Error("bad trace event line: " + line);
    ev.kind = event_kind_from_name(kind);
    ev.from = party_from_name(from);
    ev.to = party_from_name(to);
    if (payload != "-") ev.payload = from_hex(payload);
    ev.sim_time = {ms};
    current->events.push_back(std::move(ev));
  }
  return out;
}

Trace run_session(World& world, Adversary* adversary) {
  Driver d{world, adversary};
  d.trace.rng_seed = world.params().seed;
  d.trace.variant = world.params().variant;
  d.trace.outcome = d.run();
  return std::move(d.trace);
}

Trace replay_trace(const Trace& recorded, World& fresh_world, Adversary* adversary) {
  Trace again = run_session(fresh_world, adversary);
  if (again.rng_seed != recorded.rng_seed || again.variant != recorded.variant)
    throw DeterminismViolation("replay ran under a different scenario");
  if (again.events.size() != recorded.events.size())
    throw DeterminismViolation("replay diverged: event count " +
                               std::to_string(again.events.size()) + " vs " +
                               std::to_string(recorded.events.size()));
  for (std::size_t i = 0; i < again.events.size(); ++i)
    if (!(again.events[i] == recorded.events[i]))
      throw DeterminismViolation("replay diverged at event " + std::to_string(i));
  if (!(again.outcome == recorded.outcome)) throw DeterminismViolation("replay outcome differs");
  return again;
}

}  // namespace pufauth
