#include "pufauth/protocol.hpp"

#include <algorithm>

namespace pufauth {

namespace {

// h(a||b) and friends: every protocol hash goes through HashInput so operand
// boundaries are length-framed and unambiguous.
Value256 h2(const Value256& a, const Value256& b) { return HashInput().add(a).add(b).digest(); }

Value256 binding_tag(const Value256& beta, const Value256& k, Timestamp ts, const Value256& nonce) {
  return HashInput().add(beta).add(k).add(ts).add(nonce).digest();
}

StepOut rejected(Step at, RejectReason reason) {
  StepOut out;
  out.reject = Reject{at, reason};
  return out;
}

}  // namespace

const char* step_name(Step s) {
  switch (s) {
    case Step::login: return "login";
    case Step::m1: return "m1";
    case Step::m2: return "m2";
    case Step::m3: return "m3";
    case Step::m4: return "m4";
    case Step::m5: return "m5";
    case Step::ledger: return "ledger";
  }
  return "?";
}

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::login_failed: return "login";
    case RejectReason::unknown_identity: return "unknown-identity";
    case RejectReason::replay: return "replay";
    case RejectReason::gateway_auth: return "gateway-auth";
    case RejectReason::user_auth: return "user-auth";
    case RejectReason::sensor_auth: return "sensor-auth";
    case RejectReason::identity_tamper: return "identity-tamper";
    case RejectReason::protocol_order: return "protocol-order";
    case RejectReason::pool_exhausted: return "pool-exhausted";
    case RejectReason::ledger_failed: return "ledger";
    case RejectReason::timeout: return "timeout";
    case RejectReason::malformed: return "malformed";
  }
  return "?";
}

Step step_from_name(std::string_view name) {
  for (Step s : {Step::login, Step::m1, Step::m2, Step::m3, Step::m4, Step::m5, Step::ledger})
    if (name == step_name(s)) return s;
  throw Error("unknown step name: " + std::string(name));
}

RejectReason reject_reason_from_name(std::string_view name) {
  for (RejectReason r :
       {RejectReason::login_failed, RejectReason::unknown_identity, RejectReason::replay,
        RejectReason::gateway_auth, RejectReason::user_auth, RejectReason::sensor_auth,
        RejectReason::identity_tamper, RejectReason::protocol_order, RejectReason::pool_exhausted,
        RejectReason::ledger_failed, RejectReason::timeout, RejectReason::malformed})
    if (name == reject_reason_name(r)) return r;
  throw Error("unknown reject reason: " + std::string(name));
}

Freshness freshness_peek(const FreshnessCache& cache, const Value256& nonce,
                         std::optional<Timestamp> ts, const SimClock& clock,
                         const ProtocolConfig& cfg, bool binding_tag_ok) {
  if (!cfg.enhanced()) {
    // Baseline rule: a nonce is "fresh" if it was never seen before, so any
    // new random value passes.
    return cache.seen_nonces.contains(nonce) ? Freshness::stale : Freshness::fresh;
  }
  if (!ts) return Freshness::stale;
  const Timestamp now = clock.now();
  if (abs_diff(now, *ts) > cfg.delta_ms) return Freshness::stale;
  for (const auto& [n, t] : cache.seen_stamped)
    if (n == nonce && t == *ts) return Freshness::stale;
  if (!binding_tag_ok) return Freshness::stale;
  return Freshness::fresh;
}

void freshness_note(FreshnessCache& cache, const Value256& nonce, std::optional<Timestamp> ts,
                    const SimClock& clock, const ProtocolConfig& cfg) {
  if (!cfg.enhanced()) {
    cache.seen_nonces.insert(nonce);
    return;
  }
  if (!ts) return;
  const Timestamp now = clock.now();
  // retention: 2*delta is enough, anything older fails the window anyway
  std::erase_if(cache.seen_stamped, [&](const auto& e) {
    return abs_diff(now, e.second) > 2 * cfg.delta_ms;
  });
  cache.seen_stamped.emplace_back(nonce, *ts);
  cache.last_ts = *ts;
}

Freshness freshness_check(FreshnessCache& cache, const Value256& nonce,
                          std::optional<Timestamp> ts, const SimClock& clock,
                          const ProtocolConfig& cfg, bool binding_tag_ok) {
  const Freshness f = freshness_peek(cache, nonce, ts, clock, cfg, binding_tag_ok);
  if (f == Freshness::fresh) freshness_note(cache, nonce, ts, clock, cfg);
  return f;
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(ProtocolConfig cfg, Ledger* ledger, Value256 contract_addr)
    : cfg_(cfg), ledger_(ledger), contract_addr_(contract_addr) {
  if (cfg_.p22() && ledger_ == nullptr) throw Error("2022 variants need a ledger");
}

RegChallenge Gateway::reg_begin_user(const RegReq& req, std::uint32_t n_add, Rng& rng,
                                     bool repeat_challenge) {
  for (const auto& u : users_)
    if (u.id_u == req.id) throw Error("duplicate user identity");
  PendingReg p;
  p.id = req.id;
  p.is_user = true;
  // The plaintext-key provisioning needs K_u = R_u to hold for every pair the
  // pool will ever serve, so the fixture enrolls one challenge repeatedly.
  if (repeat_challenge) {
    const Value256 c = rng.value256();
    p.challenges.assign(n_add + 1, c);
  } else {
    for (std::uint32_t i = 0; i < n_add + 1; ++i) p.challenges.push_back(rng.value256());
  }
  pending_reg_ = p;
  RegChallenge ch;
  ch.c = p.challenges.front();
  ch.c_add.assign(p.challenges.begin() + 1, p.challenges.end());
  return ch;
}

RegIssue Gateway::reg_complete_user(const RegResponse& resp, Rng& rng, bool issue_k_equal_r) {
  if (!pending_reg_ || !pending_reg_->is_user) throw Error("no user registration in progress");
  std::vector<Value256> responses;
  responses.push_back(resp.r);
  responses.insert(responses.end(), resp.r_add.begin(), resp.r_add.end());
  if (responses.size() != pending_reg_->challenges.size())
    throw Error("registration response count mismatch");

  GwUserRecord rec;
  rec.id_u = pending_reg_->id;
  std::vector<CrPair> pairs;
  for (std::size_t i = 0; i < responses.size(); ++i)
    pairs.push_back({pending_reg_->challenges[i], responses[i]});
  rec.pool = CrPool(std::move(pairs));
  rec.beta_u = rng.value256();
  // The plaintext-key scenario provisions K_u := R_u; everything else draws
  // a fresh secret key.
  rec.k_u = issue_k_equal_r ? resp.r : rng.value256();
  RegIssue issue{rec.beta_u, rec.k_u};
  users_.push_back(std::move(rec));
  pending_reg_.reset();
  return issue;
}

void Gateway::reg_store_user_s1(const Value256& beta_u, const BitString& s1) {
  for (auto& u : users_)
    if (u.beta_u == beta_u) {
      u.s1 = s1;
      return;
    }
  throw Error("reg_store_user_s1: unknown user");
}

SensorRegOffer Gateway::reg_begin_sensor(const Value256& id_sn, std::uint32_t n_add, Rng& rng) {
  for (const auto& s : sensors_)
    if (s.id_sn == id_sn) throw Error("duplicate sensor identity");
  PendingReg p;
  p.id = id_sn;
  p.is_user = false;
  for (std::uint32_t i = 0; i < n_add + 1; ++i) p.challenges.push_back(rng.value256());
  p.offered_k = rng.value256();
  pending_reg_ = p;
  SensorRegOffer offer;
  offer.challenge.c = p.challenges.front();
  offer.challenge.c_add.assign(p.challenges.begin() + 1, p.challenges.end());
  offer.k_sn = p.offered_k;
  return offer;
}

RegIssue Gateway::reg_complete_sensor(const RegResponse& resp, Rng& rng) {
  if (!pending_reg_ || pending_reg_->is_user) throw Error("no sensor registration in progress");
  std::vector<Value256> responses;
  responses.push_back(resp.r);
  responses.insert(responses.end(), resp.r_add.begin(), resp.r_add.end());
  if (responses.size() != pending_reg_->challenges.size())
    throw Error("registration response count mismatch");

  GwSensorRecord rec;
  rec.id_sn = pending_reg_->id;
  std::vector<CrPair> pairs;
  for (std::size_t i = 0; i < responses.size(); ++i)
    pairs.push_back({pending_reg_->challenges[i], responses[i]});
  rec.pool = CrPool(std::move(pairs));
  rec.beta_sn = rng.value256();
  rec.k_sn = pending_reg_->offered_k;
  RegIssue issue{rec.beta_sn, rec.k_sn};
  sensors_.push_back(std::move(rec));
  pending_reg_.reset();
  return issue;
}

void Gateway::reg_anchor(const Value256& id, bool is_user, SimClock& clock, Rng& rng) {
  if (!cfg_.p22()) return;
  std::vector<std::uint8_t> record;
  record.push_back(is_user ? 'U' : 'S');
  Value256 digest = HashInput().add(id).digest();
  record.insert(record.end(), digest.bytes.begin(), digest.bytes.end());
  auto res = ledger_->contract_register(record, contract_addr_, clock, rng);
  if (!res.ok) throw Error("ledger rejected the registration record");
}

GwUserRecord* Gateway::lookup_user(const Value256& beta) {
  for (auto& u : users_)
    if (u.beta_u == beta) return &u;
  if (cfg_.enhanced()) {
    // Resynchronisation: a device that verified and adopted beta_new while
    // the gateway never saw the session end presents the pending identity.
    // Committing it here keeps honest parties in step after aborted runs.
    for (auto& u : users_)
      if (u.beta_u_new && *u.beta_u_new == beta) {
        u.beta_u = *u.beta_u_new;
        u.beta_u_new.reset();
        return &u;
      }
  }
  return nullptr;
}

GwSensorRecord* Gateway::lookup_sensor(const Value256& beta) {
  for (auto& s : sensors_)
    if (s.beta_sn == beta) return &s;
  if (cfg_.enhanced()) {
    for (auto& s : sensors_)
      if (s.beta_sn_new && *s.beta_sn_new == beta) {
        s.beta_sn = *s.beta_sn_new;
        s.beta_sn_new.reset();
        return &s;
      }
  }
  return nullptr;
}

const GwUserRecord* Gateway::find_user(const Value256& beta) const {
  for (const auto& u : users_)
    if (u.beta_u == beta) return &u;
  return nullptr;
}

const GwSensorRecord* Gateway::find_sensor(const Value256& beta) const {
  for (const auto& s : sensors_)
    if (s.beta_sn == beta) return &s;
  return nullptr;
}

StepOut Gateway::handle_m1(const M1& m1, Rng& rng, SimClock& clock) {
  GwUserRecord* rec = lookup_user(m1.beta_u);
  if (!rec) return rejected(Step::m1, RejectReason::unknown_identity);

  bool tag_ok = true;
  if (cfg_.enhanced()) {
    if (!m1.ts || !m1.v1) return rejected(Step::m1, RejectReason::malformed);
    tag_ok = *m1.v1 == binding_tag(m1.beta_u, rec->k_u, *m1.ts, m1.n1);
  }
  if (freshness_peek(rec->fresh, m1.n1, m1.ts, clock, cfg_, tag_ok) == Freshness::stale)
    return rejected(Step::m1, RejectReason::replay);

  const CrPair* pair = rec->pool.peek();
  if (!pair) return rejected(Step::m1, RejectReason::pool_exhausted);
  freshness_note(rec->fresh, m1.n1, m1.ts, clock, cfg_);

  // K_u* doubles as beta_u_new: both are h(beta_u || K_u) as specified.
  const Value256 k_u_star = h2(m1.beta_u, rec->k_u);
  const Value256 sk_u = rng.value256();
  const Value256 n2 = rng.value256();
  const Value256 sk_u_star = sk_u ^ h2(pair->challenge, pair->response);
  const Value256 c_u_star =
      pair->challenge ^
      (gw_masks_challenge_with_response(cfg_.variant) ? pair->response : rec->k_u);

  // Stored eagerly, before the session concludes; the replay scenarios rely
  // on this ordering.
  rec->sk_u = sk_u;
  rec->beta_u_new = k_u_star;

  Session s;
  s.phase = Session::Phase::awaiting_m3;
  s.user_beta = m1.beta_u;
  s.user_pair = *pair;
  s.sk_u = sk_u;
  session_ = s;

  M2 m2;
  m2.n2 = n2;
  m2.k_u_star = k_u_star;
  m2.c_u_star = c_u_star;
  m2.sk_u_star = sk_u_star;
  m2.beta_u_new = k_u_star;
  if (cfg_.p22()) m2.j = h2(pair->response, rec->k_u);
  if (cfg_.enhanced()) m2.ts = clock.now();

  StepOut out;
  out.out = m2;
  return out;
}

StepOut Gateway::handle_m3(const M3& m3, Rng& rng, SimClock& clock) {
  if (!session_ || session_->phase != Session::Phase::awaiting_m3)
    return rejected(Step::m3, RejectReason::protocol_order);

  GwUserRecord* rec = lookup_user(session_->user_beta);
  if (!rec) return rejected(Step::m3, RejectReason::unknown_identity);

  if (freshness_peek(rec->fresh, m3.n3, m3.ts, clock, cfg_) == Freshness::stale)
    return rejected(Step::m3, RejectReason::replay);

  const Value256 expected = session_->user_pair.response ^ rec->k_u ^ session_->sk_u;
  if (m3.r_u_star != expected) return rejected(Step::m3, RejectReason::user_auth);

  GwSensorRecord* snr = lookup_sensor(m3.beta_sn);
  if (!snr) return rejected(Step::m3, RejectReason::unknown_identity);
  const CrPair* pair = snr->pool.peek();
  if (!pair) return rejected(Step::m3, RejectReason::pool_exhausted);

  freshness_note(rec->fresh, m3.n3, m3.ts, clock, cfg_);
  // user pair consumed only once the device proved itself
  rec->pool.advance();

  const Value256 k_sn_star = h2(snr->beta_sn, snr->k_sn);
  // 2022 variants hand the sensor the same session key issued to the user.
  const Value256 sk_sn = cfg_.p22() ? session_->sk_u : rng.value256();
  const Value256 n4 = rng.value256();
  const Value256 sk_sn_star = sk_sn ^ h2(pair->challenge, pair->response);
  const Value256 c_sn_star = pair->challenge ^ snr->k_sn;

  snr->sk_sn = sk_sn;
  snr->beta_sn_new = k_sn_star;

  session_->phase = Session::Phase::awaiting_m5;
  session_->sensor_beta = snr->beta_sn;
  session_->sensor_pair = *pair;
  session_->sk_sn = sk_sn;

  M4 m4;
  m4.n4 = n4;
  m4.beta_u = session_->user_beta;
  m4.k_sn_star = k_sn_star;
  m4.c_sn_star = c_sn_star;
  m4.sk_sn_star = sk_sn_star;
  m4.beta_sn_new = k_sn_star;
  if (cfg_.p22()) m4.auth_sn = h2(snr->k_sn, pair->response);
  if (cfg_.enhanced()) m4.ts = clock.now();

  StepOut out;
  out.out = m4;
  return out;
}

StepOut Gateway::handle_m5(const M5& m5, SimClock& clock) {
  if (!session_ || session_->phase != Session::Phase::awaiting_m5)
    return rejected(Step::m5, RejectReason::protocol_order);

  GwSensorRecord* snr = lookup_sensor(session_->sensor_beta);
  if (!snr) return rejected(Step::m5, RejectReason::unknown_identity);

  if (freshness_peek(snr->fresh, m5.n5, m5.ts, clock, cfg_) == Freshness::stale)
    return rejected(Step::m5, RejectReason::replay);

  const Value256 expected = session_->sensor_pair.response ^ session_->sk_sn ^ snr->k_sn;
  if (m5.r_sn_star != expected) return rejected(Step::m5, RejectReason::sensor_auth);
  freshness_note(snr->fresh, m5.n5, m5.ts, clock, cfg_);

  // both pending identities become current; the sensor pair is consumed
  GwUserRecord* rec = lookup_user(session_->user_beta);
  if (rec && rec->beta_u_new) {
    rec->beta_u = *rec->beta_u_new;
    rec->beta_u_new.reset();
  }
  if (snr->beta_sn_new) {
    snr->beta_sn = *snr->beta_sn_new;
    snr->beta_sn_new.reset();
  }
  snr->pool.advance();

  if (!cfg_.p22()) {
    session_.reset();
    StepOut out;
    out.complete = true;
    return out;
  }

  // anchor the finished agreement: G_1 = h(S_1||ID_u)||h(R_u), G_2 = h(ID_sn||R_sn)
  if (!rec || !rec->s1) return rejected(Step::ledger, RejectReason::ledger_failed);
  std::vector<std::uint8_t> g1;
  const Value256 g1a = HashInput().add(*rec->s1).add(rec->id_u).digest();
  const Value256 g1b = HashInput().add(session_->user_pair.response).digest();
  g1.insert(g1.end(), g1a.bytes.begin(), g1a.bytes.end());
  g1.insert(g1.end(), g1b.bytes.begin(), g1b.bytes.end());
  const Value256 g2v = HashInput().add(snr->id_sn).add(session_->sensor_pair.response).digest();
  std::vector<std::uint8_t> g2(g2v.bytes.begin(), g2v.bytes.end());

  session_->phase = Session::Phase::awaiting_ledger;
  session_->ledger_oks = 0;

  StepOut out;
  for (auto* g : {&g1, &g2}) {
    LedgerTx tx;
    tx.g = *g;
    tx.contract_addr = contract_addr_;
    tx.ts = clock.now();
    tx.tx_hash = HashInput().add(std::span(tx.g)).add(tx.contract_addr).add(tx.ts).digest();
    out.ledger_txs.push_back(tx);
  }
  return out;
}

StepOut Gateway::handle_ledger_reply(const LedgerReply& reply, SimClock&) {
  if (!session_ || session_->phase != Session::Phase::awaiting_ledger)
    return rejected(Step::ledger, RejectReason::protocol_order);
  if (!reply.ok) {
    session_.reset();
    return rejected(Step::ledger, RejectReason::ledger_failed);
  }
  if (++session_->ledger_oks < 2) return {};
  session_.reset();
  StepOut out;
  out.complete = true;
  return out;
}

// ---------------------------------------------------------------------------
// UserDevice

UserDevice::UserDevice(ProtocolConfig cfg, Value256 id, Value256 puf_secret)
    : cfg_(cfg), id_(id), puf_(puf_secret) {}

RegResponse UserDevice::reg_answer(const RegChallenge& ch) const {
  RegResponse resp;
  resp.r = puf_.eval(ch.c);
  for (const auto& c : ch.c_add) resp.r_add.push_back(puf_.eval(c));
  return resp;
}

void UserDevice::reg_finish(const RegIssue& issue, const BitString& biometric,
                            const Value256& hard_token, Rng& rng) {
  if (registered_) throw Error("user device already registered");
  beta_u_ = issue.beta;
  k_u_ = issue.k;
  if (cfg_.fuzzy_login()) {
    if (biometric.size() != cfg_.fuzzy.biometric_len())
      throw Error("biometric length does not match fuzzy parameters");
    FuzzySketch sk = fe_gen(biometric, cfg_.fuzzy, rng);
    delta_ = HashInput().add(sk.s1).add(hard_token).digest();
    s1_ = std::move(sk.s1);
    s2_ = std::move(sk.s2);
  } else {
    x_ = HashInput().add(biometric).add(hard_token).digest();
  }
  registered_ = true;
}

bool UserDevice::login(const BitString& presented_biometric, const Value256& presented_token) {
  if (!registered_) throw Error("login before registration");
  bool ok;
  if (cfg_.fuzzy_login()) {
    BitString s1p = fe_rep(presented_biometric, *s2_, cfg_.fuzzy);
    ok = HashInput().add(s1p).add(presented_token).digest() == *delta_;
  } else {
    ok = HashInput().add(presented_biometric).add(presented_token).digest() == *x_;
  }
  logged_in_ = ok;
  return ok;
}

M1 UserDevice::auth_init(const Value256& target_beta_sn, Rng& rng, SimClock& clock) {
  if (!logged_in_) throw Error("auth_init without a successful login");
  logged_in_ = false;
  M1 m1;
  m1.beta_u = beta_u_;
  m1.n1 = rng.value256();
  if (cfg_.enhanced()) {
    m1.ts = clock.now();
    m1.v1 = binding_tag(beta_u_, k_u_, *m1.ts, m1.n1);
  }
  session_ = Session{m1.n1, target_beta_sn};
  return m1;
}

StepOut UserDevice::handle_m2(const M2& m2, Rng& rng, SimClock& clock) {
  if (!session_) return rejected(Step::m2, RejectReason::protocol_order);

  const Value256 expected = h2(beta_u_, k_u_);
  if (m2.k_u_star != expected) return rejected(Step::m2, RejectReason::gateway_auth);

  if (freshness_peek(fresh_, m2.n2, m2.ts, clock, cfg_) == Freshness::stale)
    return rejected(Step::m2, RejectReason::replay);

  // As written the device always unmasks with K_u; under the as-written 2021
  // variant the gateway masked with R_u, so this derives the wrong challenge
  // unless K_u = R_u.
  const Value256 c_u = m2.c_u_star ^ k_u_;
  const Value256 r_u = puf_.eval(c_u);

  if (cfg_.p22()) {
    if (!m2.j || *m2.j != h2(r_u, k_u_)) return rejected(Step::m2, RejectReason::gateway_auth);
  }

  const Value256 sk = m2.sk_u_star ^ h2(c_u, r_u);

  if (cfg_.enhanced() && !cfg_.disable_identity_verify) {
    // beta_u_new must equal h(beta_u||K_u); a tampered update is dropped
    // with the stored identity untouched.
    if (m2.beta_u_new != expected) return rejected(Step::m2, RejectReason::identity_tamper);
  }

  freshness_note(fresh_, m2.n2, m2.ts, clock, cfg_);
  sk_u_ = sk;
  beta_u_ = m2.beta_u_new;  // adopted immediately, as written

  M3 m3;
  m3.r_u_star = r_u ^ k_u_ ^ sk;
  m3.n3 = rng.value256();
  m3.beta_sn = session_->target_beta_sn;
  if (cfg_.enhanced()) m3.ts = clock.now();
  session_.reset();

  StepOut out;
  out.out = m3;
  return out;
}

// ---------------------------------------------------------------------------
// SensorNode

SensorNode::SensorNode(ProtocolConfig cfg, Value256 id, Value256 puf_secret)
    : cfg_(cfg), id_(id), puf_(puf_secret) {}

RegResponse SensorNode::reg_answer(const SensorRegOffer& offer) {
  if (registered_) throw Error("sensor already registered");
  k_sn_ = offer.k_sn;
  RegResponse resp;
  resp.r = puf_.eval(offer.challenge.c);
  for (const auto& c : offer.challenge.c_add) resp.r_add.push_back(puf_.eval(c));
  return resp;
}

void SensorNode::reg_finish(const RegIssue& issue) {
  beta_sn_ = issue.beta;
  registered_ = true;
}

StepOut SensorNode::handle_m4(const M4& m4, Rng& rng, SimClock& clock) {
  if (!registered_) return rejected(Step::m4, RejectReason::protocol_order);

  const Value256 expected = h2(beta_sn_, k_sn_);
  if (m4.k_sn_star != expected) return rejected(Step::m4, RejectReason::gateway_auth);

  if (freshness_peek(fresh_, m4.n4, m4.ts, clock, cfg_) == Freshness::stale)
    return rejected(Step::m4, RejectReason::replay);

  const Value256 c_sn = m4.c_sn_star ^ k_sn_;
  const Value256 r_sn = puf_.eval(c_sn);

  if (cfg_.p22()) {
    if (!m4.auth_sn || *m4.auth_sn != h2(k_sn_, r_sn))
      return rejected(Step::m4, RejectReason::gateway_auth);
  }

  const Value256 sk = m4.sk_sn_star ^ h2(c_sn, r_sn);

  if (cfg_.enhanced() && !cfg_.disable_identity_verify) {
    if (m4.beta_sn_new != expected) return rejected(Step::m4, RejectReason::identity_tamper);
  }

  freshness_note(fresh_, m4.n4, m4.ts, clock, cfg_);
  sk_sn_ = sk;
  beta_sn_ = m4.beta_sn_new;

  M5 m5;
  m5.n5 = rng.value256();
  m5.r_sn_star = r_sn ^ sk ^ k_sn_;
  if (cfg_.enhanced()) m5.ts = clock.now();

  StepOut out;
  out.out = m5;
  return out;
}

// ---------------------------------------------------------------------------
// Registration drivers (secure channel = direct call path)

void register_user(Gateway& gw, UserDevice& ud, const BitString& biometric,
                   const Value256& hard_token, std::uint32_t n_add, Rng& rng, SimClock& clock,
                   bool issue_k_equal_r) {
  if (ud.registered()) throw Error("user device already registered");
  RegReq req = ud.reg_request();
  RegChallenge ch = gw.reg_begin_user(req, n_add, rng, issue_k_equal_r);
  RegResponse resp = ud.reg_answer(ch);
  RegIssue issue = gw.reg_complete_user(resp, rng, issue_k_equal_r);
  ud.reg_finish(issue, biometric, hard_token, rng);
  if (gw.config().p22()) {
    // the gateway needs S_1 later for the ledger anchor G_1
    gw.reg_store_user_s1(issue.beta, *ud.enrolled_s1());
    gw.reg_anchor(ud.id(), true, clock, rng);
  }
}

void register_sensor(Gateway& gw, SensorNode& sn, std::uint32_t n_add, Rng& rng, SimClock& clock) {
  if (sn.registered()) throw Error("sensor already registered");
  SensorRegOffer offer = gw.reg_begin_sensor(sn.id(), n_add, rng);
  RegResponse resp = sn.reg_answer(offer);
  RegIssue issue = gw.reg_complete_sensor(resp, rng);
  sn.reg_finish(issue);
  if (gw.config().p22()) gw.reg_anchor(sn.id(), false, clock, rng);
}

}  // namespace pufauth
