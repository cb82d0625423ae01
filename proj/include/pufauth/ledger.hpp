#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pufauth/common.hpp"

namespace pufauth {

/// One ledger transaction. The hash binds every field, so any later edit is
/// caught by verify_chain.
struct LedgerTransaction {
  Value256 tx_hash;
  std::uint64_t fee = 0;  // fixed at 0
  Timestamp ts;
  std::vector<std::uint8_t> input_data;
  Value256 nonce;
  Value256 contract_addr;

  Value256 compute_hash() const;
};

struct Block {
  std::uint64_t index = 0;
  Value256 parent_hash;
  Value256 current_hash;
  Timestamp ts;
  Value256 nonce;
  std::vector<LedgerTransaction> txs;

  Value256 compute_hash() const;
};

struct SubmitResult {
  Value256 tx_hash;
  bool ok = false;
};

struct ChainCheck {
  bool valid = true;
  std::uint64_t bad_index = 0;  // meaningful when !valid
};

/// In-process append-only chain: one transaction per block, no consensus,
/// no peers. Serves as the 2022 variant's trust anchor and nothing more.
class Ledger {
 public:
  Ledger();  // creates the genesis block (index 0, all-zero parent)

  /// Appends a one-transaction block. While a fault is armed the reply is
  /// `fail` and nothing is appended.
  SubmitResult submit_tx(std::span<const std::uint8_t> input_data, const Value256& contract_addr,
                         SimClock& clock, Rng& rng);

  /// submit_tx with the input tagged as a registration record.
  SubmitResult contract_register(std::span<const std::uint8_t> record,
                                 const Value256& contract_addr, SimClock& clock, Rng& rng);

  /// Recomputes every tx hash, block hash and parent link.
  ChainCheck verify_chain() const;

  void arm_fault(std::uint32_t failures) { armed_faults_ = failures; }

  std::size_t size() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::vector<Block>& mutable_blocks() { return blocks_; }  // for corruption tests

  /// One block per line, hex fields; same structured-text style as traces.
  std::string dump() const;

 private:
  std::vector<Block> blocks_;
  std::uint32_t armed_faults_ = 0;
};

}  // namespace pufauth
