extern "C" {
#include <fips202.h>
}

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pqm2m/crypto/symbolic.hpp"

namespace pqm2m::crypto {

namespace {

constexpr uint8_t kDsaPrivTag[4] = {'S', 'D', 'K', '1'};
constexpr uint8_t kDsaPubTag[4] = {'S', 'P', 'K', '1'};
constexpr uint8_t kSigTag[4] = {'S', 'S', 'G', '1'};
constexpr uint8_t kKemPrivTag[4] = {'S', 'K', 'D', '1'};
constexpr uint8_t kKemPubTag[4] = {'S', 'E', 'K', '1'};
constexpr uint8_t kCiphertextTag[4] = {'S', 'C', 'T', '1'};

using symbolic::Seed;
using symbolic::TermId;

TermId h32(ByteView input) {
    TermId out;
    sha3_256(out.data(), input.data(), input.size());
    return out;
}

TermId h32_tagged(std::string_view tag, ByteView a, ByteView b = {}) {
    Bytes buf = concat(to_bytes(tag), a, b);
    return h32(buf);
}

bool has_tag(ByteView data, const uint8_t (&tag)[4]) {
    return data.size() >= 4 && std::memcmp(data.data(), tag, 4) == 0;
}

bool zero_padded_from(ByteView data, size_t offset) {
    if (data.size() < offset) return false;
    return std::all_of(data.begin() + static_cast<ptrdiff_t>(offset), data.end(),
                       [](uint8_t b) { return b == 0; });
}

template <size_t N>
std::optional<std::array<uint8_t, N>> read_array(ByteView data, size_t offset) {
    if (data.size() < offset + N) return std::nullopt;
    std::array<uint8_t, N> out;
    std::memcpy(out.data(), data.data() + offset, N);
    return out;
}

}  // namespace

class SymbolicWorld {
public:
    explicit SymbolicWorld(uint64_t seed) {
        uint8_t seed_bytes[8];
        put_u64_be(seed_bytes, seed);
        salt_ = h32_tagged("pqm2m-world-salt", seed_bytes);
        stream_key_ = h32_tagged("pqm2m-world-rng", seed_bytes);
    }

    void random_bytes(std::span<uint8_t> out) {
        std::lock_guard lock(mu_);
        size_t filled = 0;
        while (filled < out.size()) {
            uint8_t ctr[8];
            put_u64_be(ctr, counter_++);
            TermId block = h32_tagged("pqm2m-rng-block", stream_key_, ctr);
            size_t n = std::min(block.size(), out.size() - filled);
            std::memcpy(out.data() + filled, block.data(), n);
            filled += n;
        }
    }

    void register_dsa_seed(const Seed& seed) {
        std::lock_guard lock(mu_);
        dsa_seeds_[symbolic::key_id_from_dsa_seed(seed)] = seed;
    }

    std::optional<Seed> lookup_dsa_seed(const TermId& key_id) const {
        std::lock_guard lock(mu_);
        auto it = dsa_seeds_.find(key_id);
        if (it == dsa_seeds_.end()) return std::nullopt;
        return it->second;
    }

    const TermId& salt() const { return salt_; }

private:
    mutable std::mutex mu_;
    TermId salt_{};
    TermId stream_key_{};
    uint64_t counter_ = 0;
    std::map<TermId, Seed> dsa_seeds_;
};

std::shared_ptr<SymbolicWorld> make_symbolic_world(uint64_t seed) {
    return std::make_shared<SymbolicWorld>(seed);
}

namespace symbolic {

TermId key_id_from_dsa_seed(const Seed& seed) { return h32_tagged("pqm2m-dsa-pub", seed); }
TermId ek_id_from_kem_seed(const Seed& seed) { return h32_tagged("pqm2m-kem-pub", seed); }

std::optional<TermId> parse_public_key_id(ByteView public_key) {
    if (!has_tag(public_key, kDsaPubTag) || public_key.size() < 36 ||
        !zero_padded_from(public_key, 36)) {
        return std::nullopt;
    }
    return read_array<32>(public_key, 4);
}

std::optional<SignatureParts> parse_signature(ByteView signature) {
    if (!has_tag(signature, kSigTag) || signature.size() < 100 ||
        !zero_padded_from(signature, 100)) {
        return std::nullopt;
    }
    SignatureParts parts;
    parts.key_id = *read_array<32>(signature, 4);
    parts.message_digest = *read_array<32>(signature, 36);
    parts.tag = *read_array<32>(signature, 68);
    return parts;
}

std::optional<TermId> parse_encaps_key_id(ByteView encaps_key) {
    if (!has_tag(encaps_key, kKemPubTag) || encaps_key.size() < 36 ||
        !zero_padded_from(encaps_key, 36)) {
        return std::nullopt;
    }
    return read_array<32>(encaps_key, 4);
}

std::optional<CiphertextParts> parse_ciphertext(ByteView ciphertext) {
    if (!has_tag(ciphertext, kCiphertextTag) || ciphertext.size() < 52 ||
        !zero_padded_from(ciphertext, 52)) {
        return std::nullopt;
    }
    CiphertextParts parts;
    parts.encaps_key_id = *read_array<32>(ciphertext, 4);
    parts.nonce = *read_array<16>(ciphertext, 36);
    return parts;
}

std::optional<Seed> parse_private_seed(ByteView private_key) {
    if (private_key.size() != 20 ||
        (!has_tag(private_key, kDsaPrivTag) && !has_tag(private_key, kKemPrivTag))) {
        return std::nullopt;
    }
    return read_array<16>(private_key, 4);
}

}  // namespace symbolic

namespace {

class SymbolicProvider final : public CryptoProvider {
public:
    SymbolicProvider(SecurityLevel level, std::shared_ptr<SymbolicWorld> world)
        : level_(level), world_(std::move(world)) {
        if (!world_) throw std::invalid_argument("symbolic provider requires a world");
    }

    SecurityLevel level() const override { return level_; }

    SigningKeyPair dsa_generate() override {
        Seed seed;
        world_->random_bytes(seed);
        world_->register_dsa_seed(seed);
        SigningKeyPair kp;
        kp.private_key = render_private(kDsaPrivTag, seed);
        kp.public_key = render_tagged(kDsaPubTag, symbolic::key_id_from_dsa_seed(seed),
                                      params().dsa_public_key_bytes);
        return kp;
    }

    Bytes sign(ByteView message, ByteView private_key) override {
        auto seed = symbolic::parse_private_seed(private_key);
        if (!seed) throw std::invalid_argument("not a symbolic signing key");
        // Keys minted outside dsa_generate (e.g. by attacker scripts) become
        // verifiable once used; possession of the seed is what matters.
        world_->register_dsa_seed(*seed);
        TermId msg_digest = h32(message);
        TermId tag = h32_tagged("pqm2m-dsa-sig", *seed, msg_digest);
        Bytes sig(params().dsa_signature_bytes, 0);
        std::memcpy(sig.data(), kSigTag, 4);
        std::memcpy(sig.data() + 4, symbolic::key_id_from_dsa_seed(*seed).data(), 32);
        std::memcpy(sig.data() + 36, msg_digest.data(), 32);
        std::memcpy(sig.data() + 68, tag.data(), 32);
        return sig;
    }

    bool verify(ByteView signature, ByteView message, ByteView public_key) noexcept override {
        if (signature.size() != params().dsa_signature_bytes ||
            public_key.size() != params().dsa_public_key_bytes) {
            return false;
        }
        auto pk_id = symbolic::parse_public_key_id(public_key);
        auto parts = symbolic::parse_signature(signature);
        if (!pk_id || !parts || parts->key_id != *pk_id) return false;
        if (parts->message_digest != h32(message)) return false;
        auto seed = world_->lookup_dsa_seed(parts->key_id);
        if (!seed) return false;
        return parts->tag == h32_tagged("pqm2m-dsa-sig", *seed, parts->message_digest);
    }

    KemKeyPair kem_generate() override {
        Seed seed;
        world_->random_bytes(seed);
        KemKeyPair kp;
        kp.decapsulation_key = render_private(kKemPrivTag, seed);
        kp.encapsulation_key = render_tagged(kKemPubTag, symbolic::ek_id_from_kem_seed(seed),
                                             params().kem_encaps_key_bytes);
        return kp;
    }

    Result<Encapsulation, CryptoError> kem_encapsulate(ByteView encaps_key) override {
        if (encaps_key.size() != params().kem_encaps_key_bytes) {
            return CryptoError{"encapsulation key has wrong length"};
        }
        auto ek_id = symbolic::parse_encaps_key_id(encaps_key);
        if (!ek_id) return CryptoError{"not a symbolic encapsulation key"};
        Seed nonce;
        world_->random_bytes(nonce);
        Encapsulation out;
        out.ciphertext.assign(params().kem_ciphertext_bytes, 0);
        std::memcpy(out.ciphertext.data(), kCiphertextTag, 4);
        std::memcpy(out.ciphertext.data() + 4, ek_id->data(), 32);
        std::memcpy(out.ciphertext.data() + 36, nonce.data(), 16);
        out.secret = derive_secret(*ek_id, nonce);
        return out;
    }

    Result<SharedSecret, CryptoError> kem_decapsulate(ByteView ciphertext,
                                                      ByteView decaps_key) override {
        if (ciphertext.size() != params().kem_ciphertext_bytes) {
            return CryptoError{"ciphertext has wrong length"};
        }
        auto seed = symbolic::parse_private_seed(decaps_key);
        if (!seed) return CryptoError{"not a symbolic decapsulation key"};
        auto parts = symbolic::parse_ciphertext(ciphertext);
        if (!parts) return CryptoError{"malformed symbolic ciphertext"};
        if (parts->encaps_key_id != symbolic::ek_id_from_kem_seed(*seed)) {
            return CryptoError{"ciphertext does not match decapsulation key"};
        }
        return derive_secret(parts->encaps_key_id, parts->nonce);
    }

    Digest hash(ByteView input) override {
        Digest d(params().hash_bytes);
        switch (level_) {
            case SecurityLevel::L1: sha3_256(d.data(), input.data(), input.size()); break;
            case SecurityLevel::L3: sha3_384(d.data(), input.data(), input.size()); break;
            case SecurityLevel::L5: sha3_512(d.data(), input.data(), input.size()); break;
        }
        return d;
    }

    void random_bytes(std::span<uint8_t> out) override { world_->random_bytes(out); }

private:
    SharedSecret derive_secret(const TermId& ek_id, const Seed& nonce) const {
        Bytes input = concat(to_bytes("pqm2m-kem-ss"), world_->salt(), ek_id, nonce);
        SharedSecret s;
        s.bytes = h32(input);
        return s;
    }

    static Bytes render_private(const uint8_t (&tag)[4], const Seed& seed) {
        Bytes out(20);
        std::memcpy(out.data(), tag, 4);
        std::memcpy(out.data() + 4, seed.data(), 16);
        return out;
    }

    static Bytes render_tagged(const uint8_t (&tag)[4], const TermId& id, size_t total) {
        Bytes out(total, 0);
        std::memcpy(out.data(), tag, 4);
        std::memcpy(out.data() + 4, id.data(), 32);
        return out;
    }

    SecurityLevel level_;
    std::shared_ptr<SymbolicWorld> world_;
};

}  // namespace

std::unique_ptr<CryptoProvider> make_symbolic_provider(SecurityLevel level,
                                                       std::shared_ptr<SymbolicWorld> world) {
    return std::make_unique<SymbolicProvider>(level, std::move(world));
}

}  // namespace pqm2m::crypto
