#ifndef IRSMEC_LEDGER_HPP
#define IRSMEC_LEDGER_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

// Toy hash-chained ledger replaying the six-step offloading workflow:
// publish-task contracts, result-record contracts, block generation by a
// seeded account-charging competition, chain verification and per-task
// traceability. SHA-256 digests, Ed25519 signatures.
namespace irsmec::ledger {

using Digest = std::array<std::uint8_t, 32>;
using Bytes = std::vector<std::uint8_t>;

Digest sha256(const Bytes& data);
std::string to_hex(const Digest& d);
std::optional<Digest> from_hex(const std::string& s);

enum class Role { sensor, mec, validator };

struct NodeIdentity {
  std::string address;   // hex of the raw Ed25519 public key
  Bytes signing_key;     // raw Ed25519 private key, never serialized
  Role role;
};

struct TaskPublishContract {
  std::uint64_t task_id;
  Digest payload_digest;
  std::string publisher;  // address
  double gas;
  double gas_price;
  Bytes signature;        // over the canonical serialization of the fields above

  Bytes canonical_bytes() const;  // unsigned portion, fields in declaration order
  Digest digest() const;          // over the signed serialization
};

struct ResultRecordContract {
  std::uint64_t task_id;
  Digest result_digest;
  std::string server;  // address
  double f;            // allocated cycles/s
  double c;            // allocated cycles/bit
  double gas;
  double gas_price;
  Bytes signature;

  Bytes canonical_bytes() const;
  Digest digest() const;
};

using Contract = std::variant<TaskPublishContract, ResultRecordContract>;

struct Block {
  std::uint64_t height;
  Digest previous;                        // all-zero for genesis
  std::vector<Digest> contract_digests;   // submission order
  std::string winner;                     // account-charging competition winner
  Digest block_digest;
  std::vector<Contract> contracts;        // sealed payloads, same order

  Digest compute_digest() const;  // hash(height || previous || digests || winner)
};

struct VerifyResult {
  bool ok = true;
  std::string violation;  // empty when ok
};

struct TraceEvent {
  enum class Kind { publish, result } kind;
  std::uint64_t block_height;
  std::string party;   // publisher or server address
  std::string winner;  // block winner
};

// Single-writer state machine; concurrent readers are safe between mutations.
class Ledger {
 public:
  // Generates an Ed25519 keypair from the seeded stream (any 32 random
  // bytes form a valid raw private key) and registers the address.
  NodeIdentity create_identity(Role role, std::mt19937_64& rng);
  void register_node(const std::string& address, Role role);
  bool is_registered(const std::string& address) const;

  TaskPublishContract publish_task(const NodeIdentity& sensor, const Bytes& payload, double gas,
                                   double gas_price);
  ResultRecordContract record_result(const NodeIdentity& server, std::uint64_t task_id,
                                     const Bytes& result, double f, double c, double gas,
                                     double gas_price);
  Block mine_block(std::mt19937_64& rng);

  VerifyResult verify_chain() const;
  std::vector<TraceEvent> trace_task(std::uint64_t task_id) const;

  const std::vector<Block>& chain() const { return chain_; }
  std::vector<Block>& mutable_chain() { return chain_; }  // tamper hooks for tests
  std::size_t pending_count() const { return pending_.size(); }

  // Line-delimited export: one JSON object per line, canonical field order;
  // node lines first, then blocks in height order.
  void export_file(const std::string& path) const;
  static Ledger import_file(const std::string& path);

  std::uint64_t next_task_id() const { return next_task_id_; }

 private:
  std::map<std::string, Role> registry_;  // ordered: deterministic winner draw
  std::vector<Contract> pending_;
  std::vector<Block> chain_;
  std::uint64_t next_task_id_ = 1;
};

Bytes sign(const Bytes& signing_key, const Bytes& message);
bool verify_signature(const std::string& address_hex_pubkey, const Bytes& message,
                      const Bytes& signature);

}  // namespace irsmec::ledger

#endif  // IRSMEC_LEDGER_HPP
