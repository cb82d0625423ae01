#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pufauth/world.hpp"

namespace pufauth {

enum class PartyId { ud, gw, sn, bc, adv };

const char* party_name(PartyId p);
PartyId party_from_name(std::string_view name);

enum class EventKind { send, deliver, tamper, drop, inject };

const char* event_kind_name(EventKind k);
EventKind event_kind_from_name(std::string_view name);

struct ChannelEvent {
  std::uint64_t seq = 0;
  EventKind kind{};
  PartyId from{};
  PartyId to{};
  std::vector<std::uint8_t> payload;
  Timestamp sim_time;

  friend bool operator==(const ChannelEvent&, const ChannelEvent&) = default;
};

struct Outcome {
  bool complete = false;
  Step step{};
  RejectReason reason{};

  std::string text() const;
  static Outcome parse(std::string_view text);
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Full record of one session run: replaying the same world params, seed and
/// adversary script reproduces it byte for byte.
struct Trace {
  std::uint64_t rng_seed = 0;
  ProtocolVariant variant = ProtocolVariant::P21_FIX;
  std::vector<ChannelEvent> events;
  Outcome outcome;

  std::size_t deliver_count(MsgTag tag) const;
  std::string to_text() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Reads one or more concatenated traces from trace-file text.
std::vector<Trace> traces_from_text(std::string_view text);

struct Injection {
  PartyId to{};
  Message msg;
  std::uint64_t at_ms = 0;
};

/// Dolev-Yao hooks over the public channel: observe everything, rewrite or
/// drop in-flight messages, schedule injections. Registration traffic never
/// reaches these hooks (it does not pass the channel at all).
class Adversary {
 public:
  virtual ~Adversary() = default;

  struct Tamper {
    bool drop = false;
    std::optional<Message> replace;
  };

  virtual void on_event(const ChannelEvent&) {}
  virtual Tamper on_message(PartyId /*from*/, PartyId /*to*/, const Message&) { return {}; }
  /// Injections whose time is due at or before `horizon_ms`; each is handed
  /// over exactly once.
  virtual std::vector<Injection> take_due(std::uint64_t /*horizon_ms*/) { return {}; }
  virtual void on_injection_result(const Message& /*injected*/, const StepOut& /*result*/) {}
};

class DeterminismViolation : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kHopMs = 10;
inline constexpr std::uint64_t kTimeoutMs = 5000;

/// Drives one authentication session (login, M1..M5 and the ledger round for
/// 2022 variants) through the simulated channel. Stops at session-complete
/// or at the first reject of an expected-flow message; adversary injections
/// are processed while main-flow messages are in flight, and their results
/// are reported back to the adversary without aborting the run.
Trace run_session(World& world, Adversary* adversary);

/// Re-runs a recorded scenario against a freshly built world (same params and
/// seed) and the same adversary script; throws DeterminismViolation if any
/// event byte differs. Returns the re-recorded trace.
Trace replay_trace(const Trace& recorded, World& fresh_world, Adversary* adversary);

}  // namespace pufauth
