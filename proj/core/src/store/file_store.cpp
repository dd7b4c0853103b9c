#include "pqm2m/store/file_store.hpp"

#include <cstring>
#include <filesystem>
#include <stdexcept>

namespace pqm2m::store {

namespace {

constexpr char kLogMagic[8] = {'P', 'Q', 'M', '2', 'M', 'L', 'G', '1'};
constexpr uint32_t kLogVersion = 1;

enum class LogOp : uint8_t {
    put_admin = 0x01,
    insert_client = 0x02,
    set_time = 0x03,
    rotate_key = 0x04,
    insert_token = 0x05,
    put_perm_code = 0x06,
    purge_expired = 0x07,
    snapshot = 0x08,
};

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

struct EntryReader {
    ByteView data;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > data.size()) throw std::runtime_error("truncated log entry");
    }
    uint8_t u8() {
        need(1);
        return data[pos++];
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

FileStore::FileStore(std::string path, size_t compact_threshold) : path_(std::move(path)) {
    open_and_replay(compact_threshold);
}

FileStore::~FileStore() {
    if (file_) std::fclose(file_);
}

void FileStore::open_and_replay(size_t compact_threshold) {
    namespace fs = std::filesystem;
    bool fresh = !fs::exists(path_) || fs::file_size(path_) == 0;

    if (!fresh) {
        std::FILE* in = std::fopen(path_.c_str(), "rb");
        if (!in) throw std::runtime_error("cannot open store log: " + path_);
        Bytes content(fs::file_size(path_));
        size_t got = std::fread(content.data(), 1, content.size(), in);
        std::fclose(in);
        content.resize(got);

        if (content.size() < 12 || std::memcmp(content.data(), kLogMagic, 8) != 0) {
            throw std::runtime_error("bad store log header: " + path_);
        }
        if (get_u32_be(content.data() + 8) != kLogVersion) {
            throw std::runtime_error("unsupported store log version: " + path_);
        }

        size_t pos = 12;
        size_t valid_end = pos;
        while (pos + 4 <= content.size()) {
            uint32_t len = get_u32_be(content.data() + pos);
            if (pos + 4 + len > content.size()) break;  // torn tail, drop it
            EntryReader r{ByteView(content).subspan(pos + 4, len)};
            switch (static_cast<LogOp>(r.u8())) {
                case LogOp::put_admin: {
                    AdminRecord a;
                    a.admin_uuid = r.fixed<16>();
                    a.public_key = r.blob();
                    inner_.put_admin(a);
                    break;
                }
                case LogOp::insert_client: {
                    ClientRecord c;
                    c.uuid = r.fixed<16>();
                    c.public_key = r.blob();
                    c.key_installed_at = static_cast<Timestamp>(r.u64());
                    inner_.insert_client(c);
                    break;
                }
                case LogOp::set_time: {
                    Uuid uuid = r.fixed<16>();
                    uint64_t value = r.u64();
                    // Logged as the effect: replay CAS from the prior value.
                    inner_.compare_and_advance_time(uuid, value - 1);
                    break;
                }
                case LogOp::rotate_key: {
                    Uuid uuid = r.fixed<16>();
                    Bytes key = r.blob();
                    Timestamp now = static_cast<Timestamp>(r.u64());
                    inner_.rotate_key(uuid, key, now);
                    break;
                }
                case LogOp::insert_token: {
                    TokenRecord t;
                    t.token_hash = r.blob();
                    t.uuid = r.fixed<16>();
                    t.perms = r.fixed<16>();
                    t.issued_at = static_cast<Timestamp>(r.u64());
                    t.expires_at = static_cast<Timestamp>(r.u64());
                    inner_.insert_token(t);
                    break;
                }
                case LogOp::put_perm_code: {
                    auto code = r.fixed<15>();
                    Bytes scope = r.blob();
                    inner_.put_perm_code(code, std::string(scope.begin(), scope.end()));
                    break;
                }
                case LogOp::purge_expired: {
                    inner_.purge_expired(static_cast<Timestamp>(r.u64()));
                    break;
                }
                case LogOp::snapshot: {
                    inner_ = MemoryStore::deserialize_state(r.blob());
                    entries_since_snapshot_ = 0;
                    break;
                }
                default:
                    throw std::runtime_error("unknown store log opcode");
            }
            pos += 4 + len;
            valid_end = pos;
            ++entries_since_snapshot_;
        }

        if (valid_end != content.size()) {
            fs::resize_file(path_, valid_end);
        }
    }

    if (fresh) {
        file_ = std::fopen(path_.c_str(), "wb");
        if (!file_) throw std::runtime_error("cannot create store log: " + path_);
        Bytes header(kLogMagic, kLogMagic + 8);
        put_u32(header, kLogVersion);
        std::fwrite(header.data(), 1, header.size(), file_);
        std::fflush(file_);
    } else if (entries_since_snapshot_ > compact_threshold) {
        compact();
    }

    if (!file_) {
        file_ = std::fopen(path_.c_str(), "ab");
        if (!file_) throw std::runtime_error("cannot append to store log: " + path_);
    }
}

void FileStore::append_entry(ByteView entry) {
    uint8_t len[4];
    put_u32_be(len, static_cast<uint32_t>(entry.size()));
    std::fwrite(len, 1, 4, file_);
    std::fwrite(entry.data(), 1, entry.size(), file_);
    std::fflush(file_);
    ++entries_since_snapshot_;
}

void FileStore::compact() {
    std::lock_guard lock(io_mu_);
    if (file_) {
        std::fclose(file_);
        file_ = nullptr;
    }
    std::string tmp = path_ + ".compact";
    std::FILE* out = std::fopen(tmp.c_str(), "wb");
    if (!out) throw std::runtime_error("cannot write snapshot: " + tmp);
    Bytes entry;
    entry.push_back(static_cast<uint8_t>(LogOp::snapshot));
    put_blob(entry, inner_.serialize_state());
    Bytes header(kLogMagic, kLogMagic + 8);
    put_u32(header, kLogVersion);
    put_u32(header, static_cast<uint32_t>(entry.size()));
    std::fwrite(header.data(), 1, header.size(), out);
    std::fwrite(entry.data(), 1, entry.size(), out);
    std::fflush(out);
    std::fclose(out);
    std::filesystem::rename(tmp, path_);
    entries_since_snapshot_ = 0;
    file_ = std::fopen(path_.c_str(), "ab");
    if (!file_) throw std::runtime_error("cannot reopen store log: " + path_);
}

PutAdminResult FileStore::put_admin(const AdminRecord& record) {
    std::lock_guard lock(io_mu_);
    auto result = inner_.put_admin(record);
    if (result == PutAdminResult::ok) {
        Bytes e;
        e.push_back(static_cast<uint8_t>(LogOp::put_admin));
        e.insert(e.end(), record.admin_uuid.begin(), record.admin_uuid.end());
        put_blob(e, record.public_key);
        append_entry(e);
    }
    return result;
}

std::optional<AdminRecord> FileStore::get_admin(const Uuid& admin_uuid) const {
    return inner_.get_admin(admin_uuid);
}

InsertClientResult FileStore::insert_client(const ClientRecord& record) {
    std::lock_guard lock(io_mu_);
    auto result = inner_.insert_client(record);
    if (result == InsertClientResult::ok) {
        Bytes e;
        e.push_back(static_cast<uint8_t>(LogOp::insert_client));
        e.insert(e.end(), record.uuid.begin(), record.uuid.end());
        put_blob(e, record.public_key);
        put_u64(e, static_cast<uint64_t>(record.key_installed_at));
        append_entry(e);
    }
    return result;
}

std::optional<ClientRecord> FileStore::get_client(const Uuid& uuid) const {
    return inner_.get_client(uuid);
}

CasTimeResult FileStore::compare_and_advance_time(const Uuid& uuid, uint64_t observed) {
    std::lock_guard lock(io_mu_);
    auto result = inner_.compare_and_advance_time(uuid, observed);
    if (result.status == CasTimeResult::Status::ok) {
        Bytes e;
        e.push_back(static_cast<uint8_t>(LogOp::set_time));
        e.insert(e.end(), uuid.begin(), uuid.end());
        put_u64(e, result.value);
        append_entry(e);
    }
    return result;
}

RotateKeyResult FileStore::rotate_key(const Uuid& uuid, const Bytes& new_key, Timestamp now) {
    std::lock_guard lock(io_mu_);
    auto result = inner_.rotate_key(uuid, new_key, now);
    if (result == RotateKeyResult::ok) {
        Bytes e;
        e.push_back(static_cast<uint8_t>(LogOp::rotate_key));
        e.insert(e.end(), uuid.begin(), uuid.end());
        put_blob(e, new_key);
        put_u64(e, static_cast<uint64_t>(now));
        append_entry(e);
    }
    return result;
}

InsertTokenResult FileStore::insert_token(const TokenRecord& record) {
    std::lock_guard lock(io_mu_);
    auto result = inner_.insert_token(record);
    if (result == InsertTokenResult::ok) {
        Bytes e;
        e.push_back(static_cast<uint8_t>(LogOp::insert_token));
        put_blob(e, record.token_hash);
        e.insert(e.end(), record.uuid.begin(), record.uuid.end());
        e.insert(e.end(), record.perms.begin(), record.perms.end());
        put_u64(e, static_cast<uint64_t>(record.issued_at));
        put_u64(e, static_cast<uint64_t>(record.expires_at));
        append_entry(e);
    }
    return result;
}

TokenLookup FileStore::lookup_token(const Bytes& token_hash, Timestamp now) const {
    return inner_.lookup_token(token_hash, now);
}

void FileStore::put_perm_code(const std::array<uint8_t, 15>& code, const std::string& scope) {
    std::lock_guard lock(io_mu_);
    inner_.put_perm_code(code, scope);
    Bytes e;
    e.push_back(static_cast<uint8_t>(LogOp::put_perm_code));
    e.insert(e.end(), code.begin(), code.end());
    put_blob(e, to_bytes(std::string_view(scope)));
    append_entry(e);
}

std::optional<std::string> FileStore::lookup_perm_code(
    const std::array<uint8_t, 15>& code) const {
    return inner_.lookup_perm_code(code);
}

size_t FileStore::purge_expired(Timestamp now) {
    std::lock_guard lock(io_mu_);
    size_t purged = inner_.purge_expired(now);
    if (purged > 0) {
        Bytes e;
        e.push_back(static_cast<uint8_t>(LogOp::purge_expired));
        put_u64(e, static_cast<uint64_t>(now));
        append_entry(e);
    }
    return purged;
}

Bytes FileStore::serialize_state() const { return inner_.serialize_state(); }

size_t FileStore::token_count() const { return inner_.token_count(); }

size_t FileStore::client_count() const { return inner_.client_count(); }

}  // namespace pqm2m::store
