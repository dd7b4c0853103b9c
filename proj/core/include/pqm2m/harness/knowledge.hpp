#pragma once

#include <set>
#include <string>
#include <vector>

#include "pqm2m/crypto/provider.hpp"
#include "pqm2m/crypto/symbolic.hpp"
#include "pqm2m/harness/network.hpp"

namespace pqm2m::harness {

/// The attacker's knowledge set, grown by observing transcripts and by key
/// reveals, with a fixed-point closure whose rules mirror the primitive
/// equations: signatures and hashes are one-way constructors with no
/// destructors; the only destructor is decapsulation with a known
/// decapsulation key. The attacker performs real provider operations on data
/// it knows; it never peeks inside provider state.
class AttackerKnowledge {
public:
    AttackerKnowledge(crypto::CryptoProvider& provider);

    /// Decomposes an observed frame into all its fields (message grammar plus
    /// token structure) and files the parts.
    void observe_frame(ByteView body);
    void observe_transcript(const std::vector<TranscriptEntry>& transcript);

    /// Reveal rules: raw material handed to the attacker.
    void reveal_blob(ByteView data);         // e.g. a token or its secret
    void reveal_private_key(ByteView data);  // a signing or decapsulation key

    bool knows_blob(ByteView data) const;

    /// True iff the 32-byte secret is derivable from current knowledge:
    /// directly known, extractable from a known finalized token, or
    /// decapsulatable from a known ciphertext with a known key. On success
    /// `witness` says which rule fired.
    bool can_derive_secret(const std::array<uint8_t, 32>& secret, std::string* witness) const;

    /// True iff the attacker holds a private key whose public half matches,
    /// i.e. it could forge signatures for this principal.
    bool can_sign_for(ByteView public_key) const;

    /// Attacker-side crypto on known data (used for impersonation once keys
    /// are revealed).
    crypto::CryptoProvider& provider() { return provider_; }

private:
    void add_blob(ByteView data);

    crypto::CryptoProvider& provider_;
    std::set<Bytes, std::less<>> blobs_;
    std::vector<Bytes> ciphertexts_;   // raw SCT1 renderings seen on the wire
    std::vector<Bytes> private_keys_;  // revealed key material
};

struct SecrecyWitness {
    size_t session_index;
    std::string derivation;
};

struct SecrecyReport {
    bool all_secret = true;
    std::vector<SecrecyWitness> leaks;
};

struct SessionSecret {
    size_t action_index;
    std::array<uint8_t, 32> secret;
    Bytes final_token_bytes;
};

/// Checks that no session secret is derivable from the attacker's knowledge.
SecrecyReport assert_secrecy(const std::vector<SessionSecret>& sessions,
                             const AttackerKnowledge& knowledge);

}  // namespace pqm2m::harness
