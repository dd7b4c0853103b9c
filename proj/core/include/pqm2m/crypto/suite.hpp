#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace pqm2m::crypto {

/// NIST security category of the active parameter set. The enum value doubles
/// as the wire byte carried in the token's protocol field, so the mapping
/// between the two is a bijection by construction.
enum class SecurityLevel : uint8_t {
    L1 = 0x01,  // ML-DSA-44 / ML-KEM-512  / SHA3-256
    L3 = 0x03,  // ML-DSA-65 / ML-KEM-768  / SHA3-384
    L5 = 0x05,  // ML-DSA-87 / ML-KEM-1024 / SHA3-512
};

inline constexpr SecurityLevel kAllLevels[] = {SecurityLevel::L1, SecurityLevel::L3,
                                               SecurityLevel::L5};

/// Byte sizes that shape every variable-length wire field. All sizes come
/// from the FIPS 203/204/202 parameter sets.
struct SuiteParams {
    std::size_t dsa_public_key_bytes;  // s_key
    std::size_t dsa_signature_bytes;   // s_sig
    std::size_t kem_encaps_key_bytes;  // s_ek
    std::size_t kem_ciphertext_bytes;  // s_ct
    std::size_t hash_bytes;            // s_hash
    const char* dsa_name;
    const char* kem_name;
    const char* hash_name;
};

inline constexpr std::size_t kSharedSecretBytes = 32;

/// Returns the constant size table for the level's DSA/KEM/hash triple.
/// Throws std::out_of_range for an unregistered level value.
const SuiteParams& suite_params(SecurityLevel level);

constexpr uint8_t wire_byte(SecurityLevel level) { return static_cast<uint8_t>(level); }

/// Decodes a token protocol byte back to a level; unregistered bytes are an
/// error surfaced as nullopt.
std::optional<SecurityLevel> level_from_wire(uint8_t byte);

/// Parses "L1"/"L3"/"L5" (as used in config files and the CLI).
std::optional<SecurityLevel> level_from_name(std::string_view name);

const char* level_name(SecurityLevel level);

}  // namespace pqm2m::crypto
