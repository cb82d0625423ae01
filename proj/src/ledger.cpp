#include "pufauth/ledger.hpp"

#include <sstream>

#include "pufauth/crypto.hpp"

namespace pufauth {

namespace {
constexpr std::uint8_t kRegistrationTag = 0x52;  // 'R'
}

Value256 LedgerTransaction::compute_hash() const {
  std::uint8_t fee_be[8];
  for (int i = 0; i < 8; ++i) fee_be[i] = static_cast<std::uint8_t>(fee >> (56 - 8 * i));
  return HashInput()
      .add(std::span<const std::uint8_t>(fee_be, 8))
      .add(ts)
      .add(std::span(input_data))
      .add(nonce)
      .add(contract_addr)
      .digest();
}

Value256 Block::compute_hash() const {
  std::uint8_t idx_be[8];
  for (int i = 0; i < 8; ++i) idx_be[i] = static_cast<std::uint8_t>(index >> (56 - 8 * i));
  std::vector<std::uint8_t> tx_hashes;
  for (const auto& tx : txs)
    tx_hashes.insert(tx_hashes.end(), tx.tx_hash.bytes.begin(), tx.tx_hash.bytes.end());
  return HashInput()
      .add(std::span<const std::uint8_t>(idx_be, 8))
      .add(parent_hash)
      .add(ts)
      .add(nonce)
      .add(std::span(tx_hashes))
      .digest();
}

Ledger::Ledger() {
  Block genesis;
  genesis.index = 0;
  genesis.parent_hash = Value256{};  // all-zero by convention
  genesis.ts = Timestamp{0};
  genesis.nonce = Value256{};
  genesis.current_hash = genesis.compute_hash();
  blocks_.push_back(std::move(genesis));
}

SubmitResult Ledger::submit_tx(std::span<const std::uint8_t> input_data,
                               const Value256& contract_addr, SimClock& clock, Rng& rng) {
  if (armed_faults_ > 0) {
    --armed_faults_;
    return {Value256{}, false};
  }
  LedgerTransaction tx;
  tx.fee = 0;
  tx.ts = clock.now();
  tx.input_data.assign(input_data.begin(), input_data.end());
  tx.nonce = rng.value256();
  tx.contract_addr = contract_addr;
  tx.tx_hash = tx.compute_hash();

  Block b;
  b.index = blocks_.size();
  b.parent_hash = blocks_.back().current_hash;
  b.ts = clock.now();
  b.nonce = rng.value256();
  b.txs.push_back(tx);
  b.current_hash = b.compute_hash();
  blocks_.push_back(std::move(b));
  return {tx.tx_hash, true};
}

SubmitResult Ledger::contract_register(std::span<const std::uint8_t> record,
                                       const Value256& contract_addr, SimClock& clock, Rng& rng) {
  std::vector<std::uint8_t> tagged;
  tagged.reserve(record.size() + 1);
  tagged.push_back(kRegistrationTag);
  tagged.insert(tagged.end(), record.begin(), record.end());
  return submit_tx(tagged, contract_addr, clock, rng);
}

ChainCheck Ledger::verify_chain() const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    for (const auto& tx : b.txs)
      if (tx.compute_hash() != tx.tx_hash) return {false, b.index};
    if (b.compute_hash() != b.current_hash) return {false, b.index};
    if (i == 0) {
      if (!b.parent_hash.is_zero()) return {false, b.index};
    } else if (b.parent_hash != blocks_[i - 1].current_hash) {
      return {false, b.index};
    }
  }
  return {true, 0};
}

std::string Ledger::dump() const {
  std::ostringstream out;
  out << "ledger v1 blocks=" << blocks_.size() << "\n";
  for (const Block& b : blocks_) {
    out << b.index << " " << b.parent_hash.hex() << " " << b.current_hash.hex() << " "
        << b.ts.millis << " " << b.nonce.hex() << " " << b.txs.size();
    for (const auto& tx : b.txs) {
      out << " " << tx.tx_hash.hex() << " " << tx.fee << " " << tx.ts.millis << " "
          << tx.nonce.hex() << " " << tx.contract_addr.hex() << " "
          << (tx.input_data.empty() ? "-" : to_hex(tx.input_data));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace pufauth
