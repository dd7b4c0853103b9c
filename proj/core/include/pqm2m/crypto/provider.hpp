#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "pqm2m/bytes.hpp"
#include "pqm2m/crypto/suite.hpp"
#include "pqm2m/result.hpp"

namespace pqm2m::crypto {

struct SigningKeyPair {
    Bytes private_key;
    Bytes public_key;  // length s_key
};

struct KemKeyPair {
    Bytes decapsulation_key;
    Bytes encapsulation_key;  // length s_ek
};

/// KEM output; always exactly 32 bytes so it fits the token payload field.
struct SharedSecret {
    std::array<uint8_t, kSharedSecretBytes> bytes{};
    bool operator==(const SharedSecret&) const = default;
};

struct Encapsulation {
    Bytes ciphertext;  // length s_ct
    SharedSecret secret;
};

using Digest = Bytes;  // length s_hash of the active suite

struct CryptoError {
    std::string detail;
};

/// Signature, KEM and hash operations for one parameter set.
///
/// Two implementations exist behind this interface: a binding to real
/// FIPS 203/204/202 algorithms (PqcleanProvider) used for integration and
/// benchmarks, and a deterministic structural one (SymbolicProvider) whose
/// outputs can be inspected by the attack harness. Protocol logic must behave
/// identically under both.
///
/// All operations are stateless and safe for concurrent invocation. Key
/// material is immutable after creation.
class CryptoProvider {
public:
    virtual ~CryptoProvider() = default;

    virtual SecurityLevel level() const = 0;
    const SuiteParams& params() const { return suite_params(level()); }

    virtual SigningKeyPair dsa_generate() = 0;

    /// Signs `message`; the result always has length s_sig. Throws
    /// std::invalid_argument on a key that does not belong to the suite.
    virtual Bytes sign(ByteView message, ByteView private_key) = 0;

    /// True iff `signature` is valid for `message` under `public_key`.
    /// Accepts arbitrary attacker-supplied bytes and never throws.
    virtual bool verify(ByteView signature, ByteView message, ByteView public_key) noexcept = 0;

    virtual KemKeyPair kem_generate() = 0;
    virtual Result<Encapsulation, CryptoError> kem_encapsulate(ByteView encaps_key) = 0;
    virtual Result<SharedSecret, CryptoError> kem_decapsulate(ByteView ciphertext,
                                                              ByteView decaps_key) = 0;

    /// Deterministic digest of length s_hash.
    virtual Digest hash(ByteView input) = 0;

    virtual void random_bytes(std::span<uint8_t> out) = 0;

    Uuid random_uuid() {
        Uuid id{};
        random_bytes(id);
        // RFC 4122 version/variant bits; purely cosmetic for log readability.
        id[6] = static_cast<uint8_t>((id[6] & 0x0f) | 0x40);
        id[8] = static_cast<uint8_t>((id[8] & 0x3f) | 0x80);
        return id;
    }
};

/// Real post-quantum provider backed by the vendored PQClean implementations.
std::unique_ptr<CryptoProvider> make_pqclean_provider(SecurityLevel level);

}  // namespace pqm2m::crypto
