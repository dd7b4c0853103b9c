#include <crypto_kem/ml-kem-1024/clean/api.h>
#include <crypto_kem/ml-kem-512/clean/api.h>
#include <crypto_kem/ml-kem-768/clean/api.h>
#include <crypto_sign/ml-dsa-44/clean/api.h>
#include <crypto_sign/ml-dsa-65/clean/api.h>
#include <crypto_sign/ml-dsa-87/clean/api.h>

extern "C" {
#include <fips202.h>
#include <randombytes.h>
}

#include <stdexcept>

#include "pqm2m/crypto/provider.hpp"

namespace pqm2m::crypto {

namespace {

struct SchemeVtable {
    size_t dsa_pk, dsa_sk, dsa_sig;
    size_t kem_ek, kem_dk, kem_ct;
    int (*sign_keypair)(uint8_t*, uint8_t*);
    int (*sign_signature)(uint8_t*, size_t*, const uint8_t*, size_t, const uint8_t*, size_t,
                          const uint8_t*);
    int (*sign_verify)(const uint8_t*, size_t, const uint8_t*, size_t, const uint8_t*, size_t,
                       const uint8_t*);
    int (*kem_keypair)(uint8_t*, uint8_t*);
    int (*kem_enc)(uint8_t*, uint8_t*, const uint8_t*);
    int (*kem_dec)(uint8_t*, const uint8_t*, const uint8_t*);
    void (*sha3)(uint8_t*, const uint8_t*, size_t);
};

constexpr SchemeVtable kL1{
    PQCLEAN_MLDSA44_CLEAN_CRYPTO_PUBLICKEYBYTES,
    PQCLEAN_MLDSA44_CLEAN_CRYPTO_SECRETKEYBYTES,
    PQCLEAN_MLDSA44_CLEAN_CRYPTO_BYTES,
    PQCLEAN_MLKEM512_CLEAN_CRYPTO_PUBLICKEYBYTES,
    PQCLEAN_MLKEM512_CLEAN_CRYPTO_SECRETKEYBYTES,
    PQCLEAN_MLKEM512_CLEAN_CRYPTO_CIPHERTEXTBYTES,
    PQCLEAN_MLDSA44_CLEAN_crypto_sign_keypair,
    PQCLEAN_MLDSA44_CLEAN_crypto_sign_signature_ctx,
    PQCLEAN_MLDSA44_CLEAN_crypto_sign_verify_ctx,
    PQCLEAN_MLKEM512_CLEAN_crypto_kem_keypair,
    PQCLEAN_MLKEM512_CLEAN_crypto_kem_enc,
    PQCLEAN_MLKEM512_CLEAN_crypto_kem_dec,
    sha3_256,
};

constexpr SchemeVtable kL3{
    PQCLEAN_MLDSA65_CLEAN_CRYPTO_PUBLICKEYBYTES,
    PQCLEAN_MLDSA65_CLEAN_CRYPTO_SECRETKEYBYTES,
    PQCLEAN_MLDSA65_CLEAN_CRYPTO_BYTES,
    PQCLEAN_MLKEM768_CLEAN_CRYPTO_PUBLICKEYBYTES,
    PQCLEAN_MLKEM768_CLEAN_CRYPTO_SECRETKEYBYTES,
    PQCLEAN_MLKEM768_CLEAN_CRYPTO_CIPHERTEXTBYTES,
    PQCLEAN_MLDSA65_CLEAN_crypto_sign_keypair,
    PQCLEAN_MLDSA65_CLEAN_crypto_sign_signature_ctx,
    PQCLEAN_MLDSA65_CLEAN_crypto_sign_verify_ctx,
    PQCLEAN_MLKEM768_CLEAN_crypto_kem_keypair,
    PQCLEAN_MLKEM768_CLEAN_crypto_kem_enc,
    PQCLEAN_MLKEM768_CLEAN_crypto_kem_dec,
    sha3_384,
};

constexpr SchemeVtable kL5{
    PQCLEAN_MLDSA87_CLEAN_CRYPTO_PUBLICKEYBYTES,
    PQCLEAN_MLDSA87_CLEAN_CRYPTO_SECRETKEYBYTES,
    PQCLEAN_MLDSA87_CLEAN_CRYPTO_BYTES,
    PQCLEAN_MLKEM1024_CLEAN_CRYPTO_PUBLICKEYBYTES,
    PQCLEAN_MLKEM1024_CLEAN_CRYPTO_SECRETKEYBYTES,
    PQCLEAN_MLKEM1024_CLEAN_CRYPTO_CIPHERTEXTBYTES,
    PQCLEAN_MLDSA87_CLEAN_crypto_sign_keypair,
    PQCLEAN_MLDSA87_CLEAN_crypto_sign_signature_ctx,
    PQCLEAN_MLDSA87_CLEAN_crypto_sign_verify_ctx,
    PQCLEAN_MLKEM1024_CLEAN_crypto_kem_keypair,
    PQCLEAN_MLKEM1024_CLEAN_crypto_kem_enc,
    PQCLEAN_MLKEM1024_CLEAN_crypto_kem_dec,
    sha3_512,
};

// The suite registry sizes must agree with the FIPS implementations.
static_assert(PQCLEAN_MLDSA44_CLEAN_CRYPTO_PUBLICKEYBYTES == 1312);
static_assert(PQCLEAN_MLDSA44_CLEAN_CRYPTO_BYTES == 2420);
static_assert(PQCLEAN_MLKEM512_CLEAN_CRYPTO_PUBLICKEYBYTES == 800);
static_assert(PQCLEAN_MLKEM512_CLEAN_CRYPTO_CIPHERTEXTBYTES == 768);
static_assert(PQCLEAN_MLDSA65_CLEAN_CRYPTO_PUBLICKEYBYTES == 1952);
static_assert(PQCLEAN_MLDSA65_CLEAN_CRYPTO_BYTES == 3309);
static_assert(PQCLEAN_MLKEM768_CLEAN_CRYPTO_PUBLICKEYBYTES == 1184);
static_assert(PQCLEAN_MLKEM768_CLEAN_CRYPTO_CIPHERTEXTBYTES == 1088);
static_assert(PQCLEAN_MLDSA87_CLEAN_CRYPTO_PUBLICKEYBYTES == 2592);
static_assert(PQCLEAN_MLDSA87_CLEAN_CRYPTO_BYTES == 4627);
static_assert(PQCLEAN_MLKEM1024_CLEAN_CRYPTO_PUBLICKEYBYTES == 1568);
static_assert(PQCLEAN_MLKEM1024_CLEAN_CRYPTO_CIPHERTEXTBYTES == 1568);
static_assert(PQCLEAN_MLKEM512_CLEAN_CRYPTO_BYTES == kSharedSecretBytes);

const SchemeVtable& vtable_for(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::L1: return kL1;
        case SecurityLevel::L3: return kL3;
        case SecurityLevel::L5: return kL5;
    }
    throw std::out_of_range("unknown security level");
}

class PqcleanProvider final : public CryptoProvider {
public:
    explicit PqcleanProvider(SecurityLevel level) : level_(level), vt_(vtable_for(level)) {}

    SecurityLevel level() const override { return level_; }

    SigningKeyPair dsa_generate() override {
        SigningKeyPair kp;
        kp.public_key.resize(vt_.dsa_pk);
        kp.private_key.resize(vt_.dsa_sk);
        if (vt_.sign_keypair(kp.public_key.data(), kp.private_key.data()) != 0) {
            throw std::runtime_error("ML-DSA key generation failed");
        }
        return kp;
    }

    Bytes sign(ByteView message, ByteView private_key) override {
        if (private_key.size() != vt_.dsa_sk) {
            throw std::invalid_argument("signing key does not belong to the active suite");
        }
        Bytes sig(vt_.dsa_sig);
        size_t siglen = 0;
        if (vt_.sign_signature(sig.data(), &siglen, message.data(), message.size(), nullptr, 0,
                               private_key.data()) != 0 ||
            siglen != vt_.dsa_sig) {
            throw std::runtime_error("ML-DSA signing failed");
        }
        return sig;
    }

    bool verify(ByteView signature, ByteView message, ByteView public_key) noexcept override {
        if (signature.size() != vt_.dsa_sig || public_key.size() != vt_.dsa_pk) return false;
        return vt_.sign_verify(signature.data(), signature.size(), message.data(), message.size(),
                               nullptr, 0, public_key.data()) == 0;
    }

    KemKeyPair kem_generate() override {
        KemKeyPair kp;
        kp.encapsulation_key.resize(vt_.kem_ek);
        kp.decapsulation_key.resize(vt_.kem_dk);
        if (vt_.kem_keypair(kp.encapsulation_key.data(), kp.decapsulation_key.data()) != 0) {
            throw std::runtime_error("ML-KEM key generation failed");
        }
        return kp;
    }

    Result<Encapsulation, CryptoError> kem_encapsulate(ByteView encaps_key) override {
        if (encaps_key.size() != vt_.kem_ek) {
            return CryptoError{"encapsulation key has wrong length"};
        }
        Encapsulation out;
        out.ciphertext.resize(vt_.kem_ct);
        if (vt_.kem_enc(out.ciphertext.data(), out.secret.bytes.data(), encaps_key.data()) != 0) {
            return CryptoError{"ML-KEM encapsulation failed"};
        }
        return out;
    }

    Result<SharedSecret, CryptoError> kem_decapsulate(ByteView ciphertext,
                                                      ByteView decaps_key) override {
        if (ciphertext.size() != vt_.kem_ct) return CryptoError{"ciphertext has wrong length"};
        if (decaps_key.size() != vt_.kem_dk) {
            return CryptoError{"decapsulation key has wrong length"};
        }
        // ML-KEM uses implicit rejection: a tampered ciphertext decapsulates
        // to an unrelated secret, which the stamping flow turns into an
        // approval-hash failure.
        SharedSecret s;
        if (vt_.kem_dec(s.bytes.data(), ciphertext.data(), decaps_key.data()) != 0) {
            return CryptoError{"ML-KEM decapsulation failed"};
        }
        return s;
    }

    Digest hash(ByteView input) override {
        Digest d(params().hash_bytes);
        vt_.sha3(d.data(), input.data(), input.size());
        return d;
    }

    void random_bytes(std::span<uint8_t> out) override {
        if (::randombytes(out.data(), out.size()) != 0) {
            throw std::runtime_error("system RNG failure");
        }
    }

private:
    SecurityLevel level_;
    const SchemeVtable& vt_;
};

}  // namespace

std::unique_ptr<CryptoProvider> make_pqclean_provider(SecurityLevel level) {
    return std::make_unique<PqcleanProvider>(level);
}

}  // namespace pqm2m::crypto
