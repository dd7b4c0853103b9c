extern "C" {
#include <fips202.h>
}

#include <cstring>
#include <stdexcept>

#include "pqm2m/store/memory_store.hpp"

namespace pqm2m::store {

namespace {

constexpr char kStateMagic[8] = {'P', 'Q', 'M', '2', 'M', 'S', 'T', '1'};

void put_u32(Bytes& out, uint32_t v) {
    uint8_t buf[4];
    put_u32_be(buf, v);
    out.insert(out.end(), buf, buf + 4);
}

void put_u64(Bytes& out, uint64_t v) {
    uint8_t buf[8];
    put_u64_be(buf, v);
    out.insert(out.end(), buf, buf + 8);
}

void put_blob(Bytes& out, ByteView v) {
    put_u32(out, static_cast<uint32_t>(v.size()));
    out.insert(out.end(), v.begin(), v.end());
}

struct StateReader {
    ByteView data;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > data.size()) throw std::runtime_error("truncated store image");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = get_u32_be(data.data() + pos);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = get_u64_be(data.data() + pos);
        pos += 8;
        return v;
    }
    Bytes blob() {
        uint32_t n = u32();
        need(n);
        Bytes v(data.begin() + static_cast<ptrdiff_t>(pos),
                data.begin() + static_cast<ptrdiff_t>(pos + n));
        pos += n;
        return v;
    }
    template <size_t N>
    std::array<uint8_t, N> fixed() {
        need(N);
        std::array<uint8_t, N> v;
        std::memcpy(v.data(), data.data() + pos, N);
        pos += N;
        return v;
    }
};

}  // namespace

MemoryStore::MemoryStore(const MemoryStore& other) {
    std::lock_guard lock(other.mu_);
    admins_ = other.admins_;
    clients_ = other.clients_;
    key_ledger_ = other.key_ledger_;
    tokens_ = other.tokens_;
    perm_codes_ = other.perm_codes_;
}

Bytes MemoryStore::key_fingerprint(const Bytes& key) {
    Bytes digest(32);
    sha3_256(digest.data(), key.data(), key.size());
    return digest;
}

PutAdminResult MemoryStore::put_admin(const AdminRecord& record) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = admins_.emplace(record.admin_uuid, record);
    return inserted ? PutAdminResult::ok : PutAdminResult::duplicate_id;
}

std::optional<AdminRecord> MemoryStore::get_admin(const Uuid& admin_uuid) const {
    std::lock_guard lock(mu_);
    auto it = admins_.find(admin_uuid);
    if (it == admins_.end()) return std::nullopt;
    return it->second;
}

InsertClientResult MemoryStore::insert_client(const ClientRecord& record) {
    std::lock_guard lock(mu_);
    if (clients_.count(record.uuid) || admins_.count(record.uuid)) {
        return InsertClientResult::duplicate_id;
    }
    Bytes fp = key_fingerprint(record.public_key);
    if (key_ledger_.count(fp)) return InsertClientResult::duplicate_key;
    key_ledger_.insert(std::move(fp));
    clients_.emplace(record.uuid, record);
    return InsertClientResult::ok;
}

std::optional<ClientRecord> MemoryStore::get_client(const Uuid& uuid) const {
    std::lock_guard lock(mu_);
    auto it = clients_.find(uuid);
    if (it == clients_.end()) return std::nullopt;
    return it->second;
}

CasTimeResult MemoryStore::compare_and_advance_time(const Uuid& uuid, uint64_t observed) {
    std::lock_guard lock(mu_);
    auto it = clients_.find(uuid);
    if (it == clients_.end()) return {CasTimeResult::Status::unknown_client, 0};
    if (it->second.expected_time != observed) {
        return {CasTimeResult::Status::mismatch, it->second.expected_time};
    }
    it->second.expected_time = observed + 1;
    return {CasTimeResult::Status::ok, it->second.expected_time};
}

RotateKeyResult MemoryStore::rotate_key(const Uuid& uuid, const Bytes& new_key, Timestamp now) {
    std::lock_guard lock(mu_);
    auto it = clients_.find(uuid);
    if (it == clients_.end()) return RotateKeyResult::unknown_client;
    Bytes fp = key_fingerprint(new_key);
    if (key_ledger_.count(fp)) return RotateKeyResult::duplicate_key;
    key_ledger_.insert(std::move(fp));
    it->second.public_key = new_key;
    it->second.key_installed_at = now;
    it->second.expected_time = 0;
    it->second.key_epoch += 1;
    return RotateKeyResult::ok;
}

InsertTokenResult MemoryStore::insert_token(const TokenRecord& record) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = tokens_.emplace(record.token_hash, record);
    return inserted ? InsertTokenResult::ok : InsertTokenResult::duplicate;
}

TokenLookup MemoryStore::lookup_token(const Bytes& token_hash, Timestamp now) const {
    std::lock_guard lock(mu_);
    auto it = tokens_.find(token_hash);
    if (it == tokens_.end()) return {};
    TokenLookup out;
    out.state = now >= it->second.expires_at ? TokenState::expired : TokenState::live;
    out.perms = it->second.perms;
    out.uuid = it->second.uuid;
    return out;
}

void MemoryStore::put_perm_code(const std::array<uint8_t, 15>& code, const std::string& scope) {
    std::lock_guard lock(mu_);
    perm_codes_[code] = scope;
}

std::optional<std::string> MemoryStore::lookup_perm_code(
    const std::array<uint8_t, 15>& code) const {
    std::lock_guard lock(mu_);
    auto it = perm_codes_.find(code);
    if (it == perm_codes_.end()) return std::nullopt;
    return it->second;
}

size_t MemoryStore::purge_expired(Timestamp now) {
    std::lock_guard lock(mu_);
    size_t purged = 0;
    for (auto it = tokens_.begin(); it != tokens_.end();) {
        if (now >= it->second.expires_at) {
            it = tokens_.erase(it);
            ++purged;
        } else {
            ++it;
        }
    }
    return purged;
}

Bytes MemoryStore::serialize_state() const {
    std::lock_guard lock(mu_);
    Bytes out(kStateMagic, kStateMagic + sizeof(kStateMagic));
    put_u32(out, static_cast<uint32_t>(admins_.size()));
    for (const auto& [uuid, a] : admins_) {
        out.insert(out.end(), uuid.begin(), uuid.end());
        put_blob(out, a.public_key);
    }
    put_u32(out, static_cast<uint32_t>(clients_.size()));
    for (const auto& [uuid, c] : clients_) {
        out.insert(out.end(), uuid.begin(), uuid.end());
        put_blob(out, c.public_key);
        put_u64(out, static_cast<uint64_t>(c.key_installed_at));
        put_u64(out, c.expected_time);
        put_u64(out, c.key_epoch);
    }
    put_u32(out, static_cast<uint32_t>(key_ledger_.size()));
    for (const auto& fp : key_ledger_) put_blob(out, fp);
    put_u32(out, static_cast<uint32_t>(tokens_.size()));
    for (const auto& [hash, t] : tokens_) {
        put_blob(out, t.token_hash);
        out.insert(out.end(), t.uuid.begin(), t.uuid.end());
        out.insert(out.end(), t.perms.begin(), t.perms.end());
        put_u64(out, static_cast<uint64_t>(t.issued_at));
        put_u64(out, static_cast<uint64_t>(t.expires_at));
    }
    put_u32(out, static_cast<uint32_t>(perm_codes_.size()));
    for (const auto& [code, scope] : perm_codes_) {
        out.insert(out.end(), code.begin(), code.end());
        put_blob(out, to_bytes(std::string_view(scope)));
    }
    return out;
}

MemoryStore MemoryStore::deserialize_state(ByteView image) {
    StateReader r{image};
    auto magic = r.fixed<8>();
    if (std::memcmp(magic.data(), kStateMagic, 8) != 0) {
        throw std::runtime_error("bad store image magic");
    }
    MemoryStore s;
    uint32_t n_admins = r.u32();
    for (uint32_t i = 0; i < n_admins; ++i) {
        AdminRecord a;
        a.admin_uuid = r.fixed<16>();
        a.public_key = r.blob();
        s.admins_.emplace(a.admin_uuid, std::move(a));
    }
    uint32_t n_clients = r.u32();
    for (uint32_t i = 0; i < n_clients; ++i) {
        ClientRecord c;
        c.uuid = r.fixed<16>();
        c.public_key = r.blob();
        c.key_installed_at = static_cast<Timestamp>(r.u64());
        c.expected_time = r.u64();
        c.key_epoch = r.u64();
        s.clients_.emplace(c.uuid, std::move(c));
    }
    uint32_t n_ledger = r.u32();
    for (uint32_t i = 0; i < n_ledger; ++i) s.key_ledger_.insert(r.blob());
    uint32_t n_tokens = r.u32();
    for (uint32_t i = 0; i < n_tokens; ++i) {
        TokenRecord t;
        t.token_hash = r.blob();
        t.uuid = r.fixed<16>();
        t.perms = r.fixed<16>();
        t.issued_at = static_cast<Timestamp>(r.u64());
        t.expires_at = static_cast<Timestamp>(r.u64());
        s.tokens_.emplace(t.token_hash, std::move(t));
    }
    uint32_t n_codes = r.u32();
    for (uint32_t i = 0; i < n_codes; ++i) {
        auto code = r.fixed<15>();
        Bytes scope = r.blob();
        s.perm_codes_.emplace(code, std::string(scope.begin(), scope.end()));
    }
    return s;
}

size_t MemoryStore::token_count() const {
    std::lock_guard lock(mu_);
    return tokens_.size();
}

size_t MemoryStore::client_count() const {
    std::lock_guard lock(mu_);
    return clients_.size();
}

std::vector<TokenRecord> MemoryStore::all_tokens() const {
    std::lock_guard lock(mu_);
    std::vector<TokenRecord> out;
    out.reserve(tokens_.size());
    for (const auto& [hash, t] : tokens_) out.push_back(t);
    return out;
}

}  // namespace pqm2m::store
