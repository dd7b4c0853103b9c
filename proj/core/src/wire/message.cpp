#include "pqm2m/wire/message.hpp"

#include <cstring>
#include <stdexcept>

namespace pqm2m::wire {

namespace {

class Writer {
public:
    explicit Writer(size_t reserve) { out_.reserve(reserve); }

    void u8(uint8_t v) { out_.push_back(v); }

    void u64(uint64_t v) {
        uint8_t buf[8];
        put_u64_be(buf, v);
        raw({buf, 8});
    }

    void raw(ByteView v) { out_.insert(out_.end(), v.begin(), v.end()); }

    void sized(ByteView v, size_t expected, const char* field) {
        if (v.size() != expected) {
            throw std::invalid_argument(std::string("field size mismatch: ") + field);
        }
        raw(v);
    }

    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class Reader {
public:
    explicit Reader(ByteView data) : data_(data) {}

    bool u8(uint8_t& out) {
        if (pos_ + 1 > data_.size()) return false;
        out = data_[pos_++];
        return true;
    }

    bool u64(uint64_t& out) {
        if (pos_ + 8 > data_.size()) return false;
        out = get_u64_be(data_.data() + pos_);
        pos_ += 8;
        return true;
    }

    bool bytes(Bytes& out, size_t n) {
        if (pos_ + n > data_.size()) return false;
        out.assign(data_.begin() + static_cast<ptrdiff_t>(pos_),
                   data_.begin() + static_cast<ptrdiff_t>(pos_ + n));
        pos_ += n;
        return true;
    }

    bool view(ByteView& out, size_t n) {
        if (pos_ + n > data_.size()) return false;
        out = data_.subspan(pos_, n);
        pos_ += n;
        return true;
    }

    bool uuid(Uuid& out) {
        if (pos_ + 16 > data_.size()) return false;
        std::memcpy(out.data(), data_.data() + pos_, 16);
        pos_ += 16;
        return true;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    ByteView data_;
    size_t pos_ = 0;
};

CodecError truncated() { return {CodecError::Kind::truncated, "message body too short"}; }

}  // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::bad_time: return "BAD_TIME";
        case ErrorCode::key_expired: return "KEY_EXPIRED";
        case ErrorCode::duplicate_id: return "DUPLICATE_ID";
        case ErrorCode::duplicate_key: return "DUPLICATE_KEY";
        case ErrorCode::bad_signature: return "BAD_SIGNATURE";
        case ErrorCode::unknown_client: return "UNKNOWN_CLIENT";
        case ErrorCode::duplicate_token: return "DUPLICATE_TOKEN";
    }
    return "UNKNOWN";
}

MsgType message_type(const WireMessage& msg) {
    struct Visitor {
        MsgType operator()(const RegisterMsg&) const { return MsgType::register_client; }
        MsgType operator()(const RegSuccessMsg&) const { return MsgType::reg_success; }
        MsgType operator()(const CycleMsg&) const { return MsgType::cycle; }
        MsgType operator()(const CycleOkMsg&) const { return MsgType::cycle_ok; }
        MsgType operator()(const StampMsg&) const { return MsgType::stamp; }
        MsgType operator()(const StampedMsg&) const { return MsgType::stamped; }
        MsgType operator()(const ErrorMsg&) const { return MsgType::error; }
    };
    return std::visit(Visitor{}, msg);
}

Bytes signing_bytes(const WireMessage& msg) {
    struct Visitor {
        Bytes operator()(const RegisterMsg& m) const {
            Writer w(33 + m.client_public_key.size());
            w.u8(static_cast<uint8_t>(MsgType::register_client));
            w.raw(m.uuid);
            w.raw(m.client_public_key);
            w.raw(m.admin_uuid);
            return w.take();
        }
        Bytes operator()(const RegSuccessMsg& m) const {
            Writer w(1 + m.id_hash.size());
            w.u8(static_cast<uint8_t>(MsgType::reg_success));
            w.raw(m.id_hash);
            return w.take();
        }
        Bytes operator()(const CycleMsg& m) const {
            Writer w(17 + m.new_public_key.size());
            w.u8(static_cast<uint8_t>(MsgType::cycle));
            w.raw(m.uuid);
            w.raw(m.new_public_key);
            return w.take();
        }
        Bytes operator()(const CycleOkMsg& m) const {
            Writer w(1 + m.verification_hash.size());
            w.u8(static_cast<uint8_t>(MsgType::cycle_ok));
            w.raw(m.verification_hash);
            return w.take();
        }
        Bytes operator()(const StampMsg& m) const {
            Writer w(75 + m.encaps_key.size());
            w.u8(static_cast<uint8_t>(MsgType::stamp));
            w.raw(encode_token(m.preview));
            w.raw(m.encaps_key);
            return w.take();
        }
        Bytes operator()(const StampedMsg& m) const {
            Writer w(1 + m.approval_hash.size() + m.ciphertext.size());
            w.u8(static_cast<uint8_t>(MsgType::stamped));
            w.raw(m.approval_hash);
            w.raw(m.ciphertext);
            return w.take();
        }
        Bytes operator()(const ErrorMsg& m) const {
            Writer w(10 + m.request_hash.size());
            w.u8(static_cast<uint8_t>(MsgType::error));
            w.u8(static_cast<uint8_t>(m.code));
            w.raw(m.request_hash);
            w.u64(m.correct_time);
            return w.take();
        }
    };
    return std::visit(Visitor{}, msg);
}

Bytes encode_message(const WireMessage& msg, const crypto::SuiteParams& params) {
    struct Visitor {
        const crypto::SuiteParams& p;

        Bytes operator()(const RegisterMsg& m) const {
            Writer w(33 + p.dsa_public_key_bytes + 2 * p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::register_client));
            w.raw(m.uuid);
            w.sized(m.client_public_key, p.dsa_public_key_bytes, "client_public_key");
            w.raw(m.admin_uuid);
            w.sized(m.sig_client, p.dsa_signature_bytes, "sig_client");
            w.sized(m.sig_admin, p.dsa_signature_bytes, "sig_admin");
            return w.take();
        }
        Bytes operator()(const RegSuccessMsg& m) const {
            Writer w(1 + p.hash_bytes + p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::reg_success));
            w.sized(m.id_hash, p.hash_bytes, "id_hash");
            w.sized(m.sig_server, p.dsa_signature_bytes, "sig_server");
            return w.take();
        }
        Bytes operator()(const CycleMsg& m) const {
            Writer w(17 + p.dsa_public_key_bytes + 2 * p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::cycle));
            w.raw(m.uuid);
            w.sized(m.new_public_key, p.dsa_public_key_bytes, "new_public_key");
            w.sized(m.sig_new, p.dsa_signature_bytes, "sig_new");
            w.sized(m.sig_old, p.dsa_signature_bytes, "sig_old");
            return w.take();
        }
        Bytes operator()(const CycleOkMsg& m) const {
            Writer w(1 + p.hash_bytes + p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::cycle_ok));
            w.sized(m.verification_hash, p.hash_bytes, "verification_hash");
            w.sized(m.sig_server, p.dsa_signature_bytes, "sig_server");
            return w.take();
        }
        Bytes operator()(const StampMsg& m) const {
            Writer w(75 + p.kem_encaps_key_bytes + p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::stamp));
            w.raw(encode_token(m.preview));
            w.sized(m.encaps_key, p.kem_encaps_key_bytes, "encaps_key");
            w.sized(m.sig_client, p.dsa_signature_bytes, "sig_client");
            return w.take();
        }
        Bytes operator()(const StampedMsg& m) const {
            Writer w(1 + p.hash_bytes + p.kem_ciphertext_bytes + p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::stamped));
            w.sized(m.approval_hash, p.hash_bytes, "approval_hash");
            w.sized(m.ciphertext, p.kem_ciphertext_bytes, "ciphertext");
            w.sized(m.sig_server, p.dsa_signature_bytes, "sig_server");
            return w.take();
        }
        Bytes operator()(const ErrorMsg& m) const {
            Writer w(10 + p.hash_bytes + p.dsa_signature_bytes);
            w.u8(static_cast<uint8_t>(MsgType::error));
            w.u8(static_cast<uint8_t>(m.code));
            w.sized(m.request_hash, p.hash_bytes, "request_hash");
            w.u64(m.correct_time);
            w.sized(m.sig_server, p.dsa_signature_bytes, "sig_server");
            return w.take();
        }
    };
    return std::visit(Visitor{params}, msg);
}

Result<WireMessage, CodecError> decode_message(ByteView bytes, const crypto::SuiteParams& params) {
    Reader r(bytes);
    uint8_t disc = 0;
    if (!r.u8(disc)) return truncated();

    auto finish = [&r](WireMessage m) -> Result<WireMessage, CodecError> {
        if (!r.done()) {
            return CodecError{CodecError::Kind::trailing_bytes, "trailing bytes after message"};
        }
        return m;
    };

    switch (static_cast<MsgType>(disc)) {
        case MsgType::register_client: {
            RegisterMsg m;
            if (!r.uuid(m.uuid) || !r.bytes(m.client_public_key, params.dsa_public_key_bytes) ||
                !r.uuid(m.admin_uuid) || !r.bytes(m.sig_client, params.dsa_signature_bytes) ||
                !r.bytes(m.sig_admin, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        case MsgType::reg_success: {
            RegSuccessMsg m;
            if (!r.bytes(m.id_hash, params.hash_bytes) ||
                !r.bytes(m.sig_server, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        case MsgType::cycle: {
            CycleMsg m;
            if (!r.uuid(m.uuid) || !r.bytes(m.new_public_key, params.dsa_public_key_bytes) ||
                !r.bytes(m.sig_new, params.dsa_signature_bytes) ||
                !r.bytes(m.sig_old, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        case MsgType::cycle_ok: {
            CycleOkMsg m;
            if (!r.bytes(m.verification_hash, params.hash_bytes) ||
                !r.bytes(m.sig_server, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        case MsgType::stamp: {
            StampMsg m;
            ByteView token_bytes;
            if (!r.view(token_bytes, kTokenBytes)) return truncated();
            auto token = decode_token(token_bytes);
            if (!token.ok()) return token.error();
            m.preview = token.value();
            if (!r.bytes(m.encaps_key, params.kem_encaps_key_bytes) ||
                !r.bytes(m.sig_client, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        case MsgType::stamped: {
            StampedMsg m;
            if (!r.bytes(m.approval_hash, params.hash_bytes) ||
                !r.bytes(m.ciphertext, params.kem_ciphertext_bytes) ||
                !r.bytes(m.sig_server, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        case MsgType::error: {
            ErrorMsg m;
            uint8_t code = 0;
            if (!r.u8(code)) return truncated();
            if (code < 1 || code > 7) {
                return CodecError{CodecError::Kind::unknown_discriminator, "unknown error code"};
            }
            m.code = static_cast<ErrorCode>(code);
            if (!r.bytes(m.request_hash, params.hash_bytes) || !r.u64(m.correct_time) ||
                !r.bytes(m.sig_server, params.dsa_signature_bytes)) {
                return truncated();
            }
            return finish(std::move(m));
        }
        default:
            return CodecError{CodecError::Kind::unknown_discriminator,
                              "unknown message discriminator"};
    }
}

}  // namespace pqm2m::wire
