#include "irsmec/ledger.hpp"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

namespace irsmec::ledger {

namespace {

using EvpKeyPtr = std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)>;
using EvpMdCtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

// Canonical serialization: fields in declaration order, length-prefixed.
struct ByteWriter {
  Bytes out;

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void bytes(const std::uint8_t* p, std::size_t n) {
    u32(static_cast<std::uint32_t>(n));
    out.insert(out.end(), p, p + n);
  }
  void bytes(const Bytes& b) { bytes(b.data(), b.size()); }
  void digest(const Digest& d) { bytes(d.data(), d.size()); }
  void str(const std::string& s) {
    bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  }
};

Bytes hex_to_bytes(const std::string& s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto nib = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw std::invalid_argument("invalid hex digit");
    };
    out[i] = static_cast<std::uint8_t>(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
  }
  return out;
}

std::string bytes_to_hex(const std::uint8_t* p, std::size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string s(2 * n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    s[2 * i] = digits[p[i] >> 4];
    s[2 * i + 1] = digits[p[i] & 0xF];
  }
  return s;
}

}  // namespace

Digest sha256(const Bytes& data) {
  Digest d{};
  unsigned int len = 0;
  EvpMdCtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), d.data(), &len) != 1 || len != d.size())
    throw std::runtime_error("sha256 failed");
  return d;
}

std::string to_hex(const Digest& d) { return bytes_to_hex(d.data(), d.size()); }

std::optional<Digest> from_hex(const std::string& s) {
  if (s.size() != 64) return std::nullopt;
  Digest d{};
  try {
    Bytes b = hex_to_bytes(s);
    std::copy(b.begin(), b.end(), d.begin());
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return d;
}

Bytes sign(const Bytes& signing_key, const Bytes& message) {
  EvpKeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, signing_key.data(),
                                             signing_key.size()),
                EVP_PKEY_free);
  if (!key) throw std::runtime_error("invalid signing key");
  EvpMdCtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::size_t sig_len = 64;
  Bytes sig(sig_len);
  if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &sig_len, message.data(), message.size()) != 1)
    throw std::runtime_error("sign failed");
  sig.resize(sig_len);
  return sig;
}

bool verify_signature(const std::string& address, const Bytes& message, const Bytes& signature) {
  Bytes pub;
  try {
    pub = hex_to_bytes(address);
  } catch (const std::invalid_argument&) {
    return false;
  }
  EvpKeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pub.data(), pub.size()),
                EVP_PKEY_free);
  if (!key) return false;
  EvpMdCtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  return ctx && EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) == 1 &&
         EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                          message.size()) == 1;
}

Bytes TaskPublishContract::canonical_bytes() const {
  ByteWriter w;
  w.u64(task_id);
  w.digest(payload_digest);
  w.str(publisher);
  w.f64(gas);
  w.f64(gas_price);
  return w.out;
}

Digest TaskPublishContract::digest() const {
  ByteWriter w;
  w.bytes(canonical_bytes());
  w.bytes(signature);
  return sha256(w.out);
}

Bytes ResultRecordContract::canonical_bytes() const {
  ByteWriter w;
  w.u64(task_id);
  w.digest(result_digest);
  w.str(server);
  w.f64(f);
  w.f64(c);
  w.f64(gas);
  w.f64(gas_price);
  return w.out;
}

Digest ResultRecordContract::digest() const {
  ByteWriter w;
  w.bytes(canonical_bytes());
  w.bytes(signature);
  return sha256(w.out);
}

Digest Block::compute_digest() const {
  ByteWriter w;
  w.u64(height);
  w.digest(previous);
  w.u32(static_cast<std::uint32_t>(contract_digests.size()));
  for (const Digest& d : contract_digests) w.digest(d);
  w.str(winner);
  return sha256(w.out);
}

NodeIdentity Ledger::create_identity(Role role, std::mt19937_64& rng) {
  Bytes priv(32);
  for (std::size_t i = 0; i < priv.size(); i += 8) {
    std::uint64_t word = rng();
    for (std::size_t b = 0; b < 8; ++b) priv[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
  }
  EvpKeyPtr key(
      EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, priv.data(), priv.size()),
      EVP_PKEY_free);
  if (!key) throw std::runtime_error("keygen failed");
  std::size_t pub_len = 32;
  Bytes pub(pub_len);
  if (EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &pub_len) != 1)
    throw std::runtime_error("key export failed");

  NodeIdentity id{bytes_to_hex(pub.data(), pub_len), priv, role};
  register_node(id.address, role);
  return id;
}

void Ledger::register_node(const std::string& address, Role role) {
  if (registry_.count(address)) throw std::invalid_argument("address already registered");
  registry_[address] = role;
}

bool Ledger::is_registered(const std::string& address) const {
  return registry_.count(address) != 0;
}

TaskPublishContract Ledger::publish_task(const NodeIdentity& sensor, const Bytes& payload,
                                         double gas, double gas_price) {
  if (!is_registered(sensor.address))
    throw std::invalid_argument("publish_task: unregistered sensor");
  TaskPublishContract c;
  c.task_id = next_task_id_++;
  c.payload_digest = sha256(payload);
  c.publisher = sensor.address;
  c.gas = gas;
  c.gas_price = gas_price;
  c.signature = sign(sensor.signing_key, c.canonical_bytes());
  pending_.emplace_back(c);
  return c;
}

ResultRecordContract Ledger::record_result(const NodeIdentity& server, std::uint64_t task_id,
                                           const Bytes& result, double f, double cpb, double gas,
                                           double gas_price) {
  if (!is_registered(server.address))
    throw std::invalid_argument("record_result: unregistered server");
  bool sealed = false;
  for (const Block& b : chain_)
    for (const Contract& c : b.contracts)
      if (const auto* t = std::get_if<TaskPublishContract>(&c); t && t->task_id == task_id)
        sealed = true;
  if (!sealed)
    throw std::invalid_argument("record_result: task id not found in any sealed block");
  ResultRecordContract c;
  c.task_id = task_id;
  c.result_digest = sha256(result);
  c.server = server.address;
  c.f = f;
  c.c = cpb;
  c.gas = gas;
  c.gas_price = gas_price;
  c.signature = sign(server.signing_key, c.canonical_bytes());
  pending_.emplace_back(c);
  return c;
}

namespace {
std::string signer_address(const TaskPublishContract& c) { return c.publisher; }
std::string signer_address(const ResultRecordContract& c) { return c.server; }
}  // namespace

Block Ledger::mine_block(std::mt19937_64& rng) {
  if (pending_.empty()) throw std::invalid_argument("mine_block: pending pool is empty");
  if (registry_.empty()) throw std::invalid_argument("mine_block: no registered identities");
  std::uniform_int_distribution<std::size_t> pick(0, registry_.size() - 1);
  auto it = registry_.begin();
  std::advance(it, pick(rng));

  Block b;
  b.height = chain_.size();
  b.previous = chain_.empty() ? Digest{} : chain_.back().block_digest;
  b.winner = it->first;
  b.contracts = std::move(pending_);
  pending_.clear();
  for (const Contract& c : b.contracts)
    b.contract_digests.push_back(
        std::visit([](const auto& x) { return x.digest(); }, c));
  b.block_digest = b.compute_digest();
  chain_.push_back(b);
  return b;
}

VerifyResult Ledger::verify_chain() const {
  auto fail = [](std::string what) { return VerifyResult{false, std::move(what)}; };
  std::map<std::uint64_t, std::uint64_t> task_height;  // task id -> publish block height
  for (std::size_t h = 0; h < chain_.size(); ++h) {
    const Block& b = chain_[h];
    if (b.height != h)
      return fail("block " + std::to_string(h) + ": height mismatch");
    const Digest expect_prev = (h == 0) ? Digest{} : chain_[h - 1].block_digest;
    if (b.previous != expect_prev)
      return fail("block " + std::to_string(h) + ": broken previous-digest link");
    if (b.contracts.size() != b.contract_digests.size())
      return fail("block " + std::to_string(h) + ": digest list length mismatch");
    for (std::size_t i = 0; i < b.contracts.size(); ++i) {
      const Digest d = std::visit([](const auto& x) { return x.digest(); }, b.contracts[i]);
      if (d != b.contract_digests[i])
        return fail("block " + std::to_string(h) + ": contract " + std::to_string(i) +
                    " digest mismatch");
      bool sig_ok = std::visit(
          [](const auto& x) {
            return verify_signature(signer_address(x), x.canonical_bytes(), x.signature);
          },
          b.contracts[i]);
      if (!sig_ok)
        return fail("block " + std::to_string(h) + ": contract " + std::to_string(i) +
                    " signature invalid");
      if (const auto* t = std::get_if<TaskPublishContract>(&b.contracts[i])) {
        if (!task_height.count(t->task_id)) task_height[t->task_id] = h;
      } else {
        const auto& r = std::get<ResultRecordContract>(b.contracts[i]);
        auto it = task_height.find(r.task_id);
        if (it == task_height.end() || it->second >= h)
          return fail("block " + std::to_string(h) + ": result precedes its task");
      }
    }
    if (b.block_digest != b.compute_digest())
      return fail("block " + std::to_string(h) + ": block digest mismatch");
  }
  return {};
}

std::vector<TraceEvent> Ledger::trace_task(std::uint64_t task_id) const {
  std::vector<TraceEvent> events;
  for (const Block& b : chain_)
    for (const Contract& c : b.contracts) {
      if (const auto* t = std::get_if<TaskPublishContract>(&c); t && t->task_id == task_id)
        events.push_back({TraceEvent::Kind::publish, b.height, t->publisher, b.winner});
      else if (const auto* r = std::get_if<ResultRecordContract>(&c); r && r->task_id == task_id)
        events.push_back({TraceEvent::Kind::result, b.height, r->server, b.winner});
    }
  return events;
}

namespace {

using json = nlohmann::ordered_json;

json contract_to_json(const TaskPublishContract& c) {
  return {{"kind", "publish"},
          {"task_id", c.task_id},
          {"payload_digest", to_hex(c.payload_digest)},
          {"publisher", c.publisher},
          {"gas", c.gas},
          {"gas_price", c.gas_price},
          {"signature", bytes_to_hex(c.signature.data(), c.signature.size())}};
}

json contract_to_json(const ResultRecordContract& c) {
  return {{"kind", "result"},
          {"task_id", c.task_id},
          {"result_digest", to_hex(c.result_digest)},
          {"server", c.server},
          {"f", c.f},
          {"c", c.c},
          {"gas", c.gas},
          {"gas_price", c.gas_price},
          {"signature", bytes_to_hex(c.signature.data(), c.signature.size())}};
}

Digest require_digest(const json& j, const char* key) {
  auto d = from_hex(j.at(key).get<std::string>());
  if (!d) throw std::runtime_error(std::string("ledger import: bad digest field ") + key);
  return *d;
}

Contract contract_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "publish") {
    TaskPublishContract c;
    c.task_id = j.at("task_id").get<std::uint64_t>();
    c.payload_digest = require_digest(j, "payload_digest");
    c.publisher = j.at("publisher").get<std::string>();
    c.gas = j.at("gas").get<double>();
    c.gas_price = j.at("gas_price").get<double>();
    c.signature = hex_to_bytes(j.at("signature").get<std::string>());
    return c;
  }
  if (kind == "result") {
    ResultRecordContract c;
    c.task_id = j.at("task_id").get<std::uint64_t>();
    c.result_digest = require_digest(j, "result_digest");
    c.server = j.at("server").get<std::string>();
    c.f = j.at("f").get<double>();
    c.c = j.at("c").get<double>();
    c.gas = j.at("gas").get<double>();
    c.gas_price = j.at("gas_price").get<double>();
    c.signature = hex_to_bytes(j.at("signature").get<std::string>());
    return c;
  }
  throw std::runtime_error("ledger import: unknown contract kind");
}

}  // namespace

void Ledger::export_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("ledger export: cannot open " + path);
  for (const auto& [addr, role] : registry_) {
    json j = {{"type", "node"},
              {"address", addr},
              {"role", role == Role::sensor ? "sensor" : role == Role::mec ? "mec" : "validator"}};
    out << j.dump() << '\n';
  }
  for (const Block& b : chain_) {
    json contracts = json::array();
    for (const Contract& c : b.contracts)
      contracts.push_back(std::visit([](const auto& x) { return contract_to_json(x); }, c));
    json j = {{"type", "block"},
              {"height", b.height},
              {"previous", to_hex(b.previous)},
              {"winner", b.winner},
              {"digest", to_hex(b.block_digest)},
              {"contracts", contracts}};
    out << j.dump() << '\n';
  }
}

Ledger Ledger::import_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ledger import: cannot open " + path);
  Ledger led;
  std::string line;
  std::uint64_t max_task = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "node") {
      const std::string role = j.at("role").get<std::string>();
      led.register_node(j.at("address").get<std::string>(),
                        role == "sensor" ? Role::sensor
                                         : role == "mec" ? Role::mec : Role::validator);
    } else if (type == "block") {
      Block b;
      b.height = j.at("height").get<std::uint64_t>();
      b.previous = require_digest(j, "previous");
      b.winner = j.at("winner").get<std::string>();
      b.block_digest = require_digest(j, "digest");
      for (const json& cj : j.at("contracts")) {
        Contract c = contract_from_json(cj);
        b.contracts.push_back(c);
        b.contract_digests.push_back(std::visit([](const auto& x) { return x.digest(); }, c));
        if (const auto* t = std::get_if<TaskPublishContract>(&c))
          max_task = std::max(max_task, t->task_id);
      }
      led.chain_.push_back(std::move(b));
    } else {
      throw std::runtime_error("ledger import: unknown line type " + type);
    }
  }
  led.next_task_id_ = max_task + 1;
  return led;
}

}  // namespace irsmec::ledger
