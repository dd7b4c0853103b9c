#pragma once

#include <array>
#include <memory>
#include <optional>

#include "pqm2m/crypto/provider.hpp"

namespace pqm2m::crypto {

/// Shared state behind a family of symbolic providers: the key registry that
/// structural verification consults, a hidden salt that keeps KEM secrets
/// underivable from wire bytes, and a deterministic RNG stream.
///
/// One world per test scenario; all roles (client, server, admin, attacker)
/// must draw their providers from the same world.
class SymbolicWorld;

std::shared_ptr<SymbolicWorld> make_symbolic_world(uint64_t seed);

/// Deterministic structural provider. Signatures and ciphertexts are tagged
/// terms rendered to suite-exact lengths; verification is structural; secrets
/// are derived from a salt that never appears in any rendering, so an
/// observer holding only wire bytes cannot reconstruct them. The hash is real
/// SHA-3 at the suite width.
std::unique_ptr<CryptoProvider> make_symbolic_provider(SecurityLevel level,
                                                       std::shared_ptr<SymbolicWorld> world);

/// Structural inspection of symbolic renderings, used by the attack harness
/// to decompose transcripts. All parsers reject buffers without the expected
/// tag and return nullopt.
namespace symbolic {

using TermId = std::array<uint8_t, 32>;
using Seed = std::array<uint8_t, 16>;

struct SignatureParts {
    TermId key_id;
    TermId message_digest;
    TermId tag;
};

struct CiphertextParts {
    TermId encaps_key_id;
    Seed nonce;
};

std::optional<TermId> parse_public_key_id(ByteView public_key);
std::optional<SignatureParts> parse_signature(ByteView signature);
std::optional<TermId> parse_encaps_key_id(ByteView encaps_key);
std::optional<CiphertextParts> parse_ciphertext(ByteView ciphertext);

/// Extracts the raw seed from a rendered private key (dsa or kem).
std::optional<Seed> parse_private_seed(ByteView private_key);

TermId key_id_from_dsa_seed(const Seed& seed);
TermId ek_id_from_kem_seed(const Seed& seed);

}  // namespace symbolic

}  // namespace pqm2m::crypto
