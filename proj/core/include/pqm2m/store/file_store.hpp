#pragma once

#include <cstdio>
#include <string>

#include "pqm2m/store/memory_store.hpp"

namespace pqm2m::store {

/// File-backed store: an append-only operation log replayed into a
/// MemoryStore on open, with snapshot compaction once the log grows past a
/// threshold. A torn final entry (crash mid-append) is detected and dropped
/// during replay.
///
/// On-disk format: 8-byte magic "PQM2MLG1", u32 BE format version, then
/// length-prefixed entries (u32 BE length, opcode byte, payload).
class FileStore final : public ServerStore {
public:
    explicit FileStore(std::string path, size_t compact_threshold = 1024);
    ~FileStore() override;

    FileStore(const FileStore&) = delete;
    FileStore& operator=(const FileStore&) = delete;

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

    /// Rewrites the log as a single snapshot entry.
    void compact();

    const std::string& path() const { return path_; }

private:
    void open_and_replay(size_t compact_threshold);
    void append_entry(ByteView entry);

    mutable std::mutex io_mu_;
    std::string path_;
    std::FILE* file_ = nullptr;
    size_t entries_since_snapshot_ = 0;
    MemoryStore inner_;
};

}  // namespace pqm2m::store
