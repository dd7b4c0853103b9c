#pragma once

#include <map>
#include <mutex>
#include <set>

#include "pqm2m/store/store.hpp"

namespace pqm2m::store {

/// Associative in-memory store. All operations lock one mutex, which makes
/// every contract operation trivially linearizable.
class MemoryStore final : public ServerStore {
public:
    MemoryStore() = default;
    MemoryStore(const MemoryStore& other);

    PutAdminResult put_admin(const AdminRecord& record) override;
    std::optional<AdminRecord> get_admin(const Uuid& admin_uuid) const override;

    InsertClientResult insert_client(const ClientRecord& record) override;
    std::optional<ClientRecord> get_client(const Uuid& uuid) const override;

    CasTimeResult compare_and_advance_time(const Uuid& uuid, uint64_t observed) override;
    RotateKeyResult rotate_key(const Uuid& uuid, const Bytes& new_key, Timestamp now) override;

    InsertTokenResult insert_token(const TokenRecord& record) override;
    TokenLookup lookup_token(const Bytes& token_hash, Timestamp now) const override;

    void put_perm_code(const std::array<uint8_t, 15>& code, const std::string& scope) override;
    std::optional<std::string> lookup_perm_code(
        const std::array<uint8_t, 15>& code) const override;

    size_t purge_expired(Timestamp now) override;

    Bytes serialize_state() const override;
    size_t token_count() const override;
    size_t client_count() const override;

    /// Rebuilds state from a serialize_state() image. Replaces everything.
    static MemoryStore deserialize_state(ByteView image);

    std::vector<TokenRecord> all_tokens() const;

private:
    // Key uniqueness ledger entries are digests of keys, not key bytes.
    static Bytes key_fingerprint(const Bytes& key);

    mutable std::mutex mu_;
    std::map<Uuid, AdminRecord> admins_;
    std::map<Uuid, ClientRecord> clients_;
    std::set<Bytes> key_ledger_;
    std::map<Bytes, TokenRecord> tokens_;
    std::map<std::array<uint8_t, 15>, std::string> perm_codes_;
};

}  // namespace pqm2m::store
