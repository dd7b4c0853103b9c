#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pqm2m/bytes.hpp"
#include "pqm2m/store/clock.hpp"

namespace pqm2m::store {

struct ClientRecord {
    Uuid uuid{};
    Bytes public_key;
    Timestamp key_installed_at = 0;
    uint64_t expected_time = 0;  // next protocol time the server will accept
    uint64_t key_epoch = 0;
    bool operator==(const ClientRecord&) const = default;
};

/// Only the digest of a finalized token is ever stored, never token bytes.
struct TokenRecord {
    Bytes token_hash;
    Uuid uuid{};
    std::array<uint8_t, 16> perms{};
    Timestamp issued_at = 0;
    Timestamp expires_at = 0;
    bool operator==(const TokenRecord&) const = default;
};

struct AdminRecord {
    Uuid admin_uuid{};
    Bytes public_key;
    bool operator==(const AdminRecord&) const = default;
};

enum class InsertClientResult : uint8_t { ok, duplicate_id, duplicate_key };
enum class RotateKeyResult : uint8_t { ok, duplicate_key, unknown_client };
enum class InsertTokenResult : uint8_t { ok, duplicate };
enum class PutAdminResult : uint8_t { ok, duplicate_id };
enum class TokenState : uint8_t { live, expired, absent };

struct CasTimeResult {
    enum class Status : uint8_t { ok, mismatch, unknown_client } status;
    /// ok: the new expected time (observed + 1); mismatch: the stored value.
    uint64_t value = 0;
};

struct TokenLookup {
    TokenState state = TokenState::absent;
    std::array<uint8_t, 16> perms{};
    Uuid uuid{};
};

/// Persistence contract shared by the in-memory and file-backed stores.
///
/// Every mutating operation is atomic and linearizable: insert-if-absent on
/// client uuids, token hashes and the retired-key ledger, compare-and-set on
/// per-client protocol time. Implementations must be safe for concurrent
/// callers; the server runs one driver per connection against one store.
///
/// Uniqueness of public keys is global across history: every key ever
/// accepted (registration or cycle) stays in the ledger even after rotation,
/// so a retired key can never be re-registered.
class ServerStore {
public:
    virtual ~ServerStore() = default;

    virtual PutAdminResult put_admin(const AdminRecord& record) = 0;
    virtual std::optional<AdminRecord> get_admin(const Uuid& admin_uuid) const = 0;

    virtual InsertClientResult insert_client(const ClientRecord& record) = 0;
    virtual std::optional<ClientRecord> get_client(const Uuid& uuid) const = 0;

    /// Atomic: if the stored expected time equals `observed`, advance it to
    /// observed + 1 and return ok(observed + 1); otherwise return
    /// mismatch(stored) without changing anything.
    virtual CasTimeResult compare_and_advance_time(const Uuid& uuid, uint64_t observed) = 0;

    /// Installs a new public key: resets expected time to zero, bumps the key
    /// epoch, retires the old key into the uniqueness ledger.
    virtual RotateKeyResult rotate_key(const Uuid& uuid, const Bytes& new_key,
                                       Timestamp now) = 0;

    virtual InsertTokenResult insert_token(const TokenRecord& record) = 0;
    virtual TokenLookup lookup_token(const Bytes& token_hash, Timestamp now) const = 0;

    /// Mode-1 permission codes: 15-byte code to scope string.
    virtual void put_perm_code(const std::array<uint8_t, 15>& code, const std::string& scope) = 0;
    virtual std::optional<std::string> lookup_perm_code(
        const std::array<uint8_t, 15>& code) const = 0;

    /// Removes token records whose expiry has passed.
    virtual size_t purge_expired(Timestamp now) = 0;

    /// Serialized image of the full store state. Used for snapshots and for
    /// the secrecy tests that byte-scan everything at rest.
    virtual Bytes serialize_state() const = 0;

    virtual size_t token_count() const = 0;
    virtual size_t client_count() const = 0;
};

}  // namespace pqm2m::store
