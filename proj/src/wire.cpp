#include "pufauth/wire.hpp"

namespace pufauth {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (24 - 8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (56 - 8 * i)));
  }
  void value(const Value256& v) { buf_.insert(buf_.end(), v.bytes.begin(), v.bytes.end()); }
  void ts(Timestamp t) { u64(t.millis); }
  void bytes(std::span<const std::uint8_t> b) {
    u32(static_cast<std::uint32_t>(b.size()));
    buf_.insert(buf_.end(), b.begin(), b.end());
  }
  void values(const std::vector<Value256>& vs) {
    u32(static_cast<std::uint32_t>(vs.size()));
    for (const auto& v : vs) value(v);
  }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto p = take(4);
    return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
  }
  std::uint64_t u64() {
    std::uint64_t hi = u32(), lo = u32();
    return hi << 32 | lo;
  }
  Value256 value() {
    auto p = take(32);
    Value256 v;
    std::copy(p.begin(), p.end(), v.bytes.begin());
    return v;
  }
  Timestamp ts() { return {u64()}; }
  std::vector<std::uint8_t> bytes() {
    auto n = u32();
    auto p = take(n);
    return {p.begin(), p.end()};
  }
  std::vector<Value256> values() {
    auto n = u32();
    if (n > 1u << 20) throw WireError("array length implausible");
    std::vector<Value256> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(value());
    return out;
  }
  void expect_end() const {
    if (pos_ != b_.size()) throw WireError("trailing bytes in message");
  }

 private:
  std::span<const std::uint8_t> take(std::size_t n) {
    if (pos_ + n > b_.size()) throw WireError("message truncated");
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

MsgTag tag_of(const Message& m) {
  return static_cast<MsgTag>(m.index() + 1);
}

bool is_registration(const Message& m) {
  auto t = tag_of(m);
  return t == MsgTag::reg_req || t == MsgTag::reg_challenge || t == MsgTag::reg_response ||
         t == MsgTag::reg_issue;
}

const char* tag_name(MsgTag t) {
  switch (t) {
    case MsgTag::reg_req: return "reg-req";
    case MsgTag::reg_challenge: return "reg-challenge";
    case MsgTag::reg_response: return "reg-response";
    case MsgTag::reg_issue: return "reg-issue";
    case MsgTag::m1: return "m1";
    case MsgTag::m2: return "m2";
    case MsgTag::m3: return "m3";
    case MsgTag::m4: return "m4";
    case MsgTag::m5: return "m5";
    case MsgTag::ledger_tx: return "ledger-tx";
    case MsgTag::ledger_reply: return "ledger-reply";
  }
  return "?";
}

std::vector<std::uint8_t> serialize(const Message& m) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(tag_of(m)));
  std::visit(
      [&](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, RegReq>) {
          w.value(msg.id);
        } else if constexpr (std::is_same_v<T, RegChallenge>) {
          w.value(msg.c);
          w.values(msg.c_add);
        } else if constexpr (std::is_same_v<T, RegResponse>) {
          w.value(msg.r);
          w.values(msg.r_add);
        } else if constexpr (std::is_same_v<T, RegIssue>) {
          w.value(msg.beta);
          w.value(msg.k);
        } else if constexpr (std::is_same_v<T, M1>) {
          w.value(msg.beta_u);
          w.value(msg.n1);
          if (msg.ts) w.ts(*msg.ts);
          if (msg.v1) w.value(*msg.v1);
        } else if constexpr (std::is_same_v<T, M2>) {
          w.value(msg.n2);
          w.value(msg.k_u_star);
          w.value(msg.c_u_star);
          w.value(msg.sk_u_star);
          w.value(msg.beta_u_new);
          if (msg.j) w.value(*msg.j);
          if (msg.ts) w.ts(*msg.ts);
        } else if constexpr (std::is_same_v<T, M3>) {
          w.value(msg.r_u_star);
          w.value(msg.n3);
          w.value(msg.beta_sn);
          if (msg.ts) w.ts(*msg.ts);
        } else if constexpr (std::is_same_v<T, M4>) {
          w.value(msg.n4);
          w.value(msg.beta_u);
          w.value(msg.k_sn_star);
          w.value(msg.c_sn_star);
          w.value(msg.sk_sn_star);
          w.value(msg.beta_sn_new);
          if (msg.auth_sn) w.value(*msg.auth_sn);
          if (msg.ts) w.ts(*msg.ts);
        } else if constexpr (std::is_same_v<T, M5>) {
          w.value(msg.n5);
          w.value(msg.r_sn_star);
          if (msg.ts) w.ts(*msg.ts);
        } else if constexpr (std::is_same_v<T, LedgerTx>) {
          w.bytes(msg.g);
          w.value(msg.tx_hash);
          w.value(msg.contract_addr);
          w.ts(msg.ts);
        } else if constexpr (std::is_same_v<T, LedgerReply>) {
          w.u8(msg.ok ? 1 : 0);
        }
      },
      m);
  return w.take();
}

Message parse(std::span<const std::uint8_t> bytes, ProtocolVariant v) {
  if (bytes.empty()) throw WireError("empty message");
  Reader r(bytes);
  const auto tag = static_cast<MsgTag>(r.u8());
  const bool enh = is_enhanced(v);
  const bool p22 = is_p22(v);
  Message out;
  switch (tag) {
    case MsgTag::reg_req: {
      out = RegReq{r.value()};
      break;
    }
    case MsgTag::reg_challenge: {
      RegChallenge m;
      m.c = r.value();
      m.c_add = r.values();
      out = m;
      break;
    }
    case MsgTag::reg_response: {
      RegResponse m;
      m.r = r.value();
      m.r_add = r.values();
      out = m;
      break;
    }
    case MsgTag::reg_issue: {
      out = RegIssue{r.value(), r.value()};
      break;
    }
    case MsgTag::m1: {
      M1 m;
      m.beta_u = r.value();
      m.n1 = r.value();
      if (enh) {
        m.ts = r.ts();
        m.v1 = r.value();
      }
      out = m;
      break;
    }
    case MsgTag::m2: {
      M2 m;
      m.n2 = r.value();
      m.k_u_star = r.value();
      m.c_u_star = r.value();
      m.sk_u_star = r.value();
      m.beta_u_new = r.value();
      if (p22) m.j = r.value();
      if (enh) m.ts = r.ts();
      out = m;
      break;
    }
    case MsgTag::m3: {
      M3 m;
      m.r_u_star = r.value();
      m.n3 = r.value();
      m.beta_sn = r.value();
      if (enh) m.ts = r.ts();
      out = m;
      break;
    }
    case MsgTag::m4: {
      M4 m;
      m.n4 = r.value();
      m.beta_u = r.value();
      m.k_sn_star = r.value();
      m.c_sn_star = r.value();
      m.sk_sn_star = r.value();
      m.beta_sn_new = r.value();
      if (p22) m.auth_sn = r.value();
      if (enh) m.ts = r.ts();
      out = m;
      break;
    }
    case MsgTag::m5: {
      M5 m;
      m.n5 = r.value();
      m.r_sn_star = r.value();
      if (enh) m.ts = r.ts();
      out = m;
      break;
    }
    case MsgTag::ledger_tx: {
      LedgerTx m;
      m.g = r.bytes();
      m.tx_hash = r.value();
      m.contract_addr = r.value();
      m.ts = r.ts();
      out = m;
      break;
    }
    case MsgTag::ledger_reply: {
      out = LedgerReply{r.u8() != 0};
      break;
    }
    default:
      throw WireError("unknown message tag");
  }
  r.expect_end();
  return out;
}

}  // namespace pufauth
