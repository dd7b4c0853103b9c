#include "pqm2m/harness/knowledge.hpp"

#include "pqm2m/wire/message.hpp"

namespace pqm2m::harness {

namespace {

void add_token_parts(const wire::Token& token, std::set<Bytes, std::less<>>& blobs) {
    blobs.insert(to_bytes(ByteView(token.uuid)));
    blobs.insert(to_bytes(ByteView(token.perms)));
    blobs.insert(to_bytes(ByteView(token.payload)));
}

}  // namespace

AttackerKnowledge::AttackerKnowledge(crypto::CryptoProvider& provider) : provider_(provider) {}

void AttackerKnowledge::add_blob(ByteView data) { blobs_.insert(to_bytes(data)); }

void AttackerKnowledge::observe_frame(ByteView body) {
    add_blob(body);

    if (body.size() == wire::kTokenBytes) {
        auto token = wire::decode_token(body);
        if (token.ok()) add_token_parts(token.value(), blobs_);
        return;
    }

    auto decoded = wire::decode_message(body, provider_.params());
    if (!decoded.ok()) return;

    struct Visitor {
        AttackerKnowledge& k;

        void operator()(const wire::RegisterMsg& m) {
            k.add_blob(m.uuid);
            k.add_blob(m.client_public_key);
            k.add_blob(m.admin_uuid);
            k.add_blob(m.sig_client);
            k.add_blob(m.sig_admin);
        }
        void operator()(const wire::RegSuccessMsg& m) {
            k.add_blob(m.id_hash);
            k.add_blob(m.sig_server);
        }
        void operator()(const wire::CycleMsg& m) {
            k.add_blob(m.uuid);
            k.add_blob(m.new_public_key);
            k.add_blob(m.sig_new);
            k.add_blob(m.sig_old);
        }
        void operator()(const wire::CycleOkMsg& m) {
            k.add_blob(m.verification_hash);
            k.add_blob(m.sig_server);
        }
        void operator()(const wire::StampMsg& m) {
            wire::TokenBytes preview = wire::encode_token(m.preview);
            k.add_blob(preview);
            add_token_parts(m.preview, k.blobs_);
            k.add_blob(m.encaps_key);
            k.add_blob(m.sig_client);
        }
        void operator()(const wire::StampedMsg& m) {
            k.add_blob(m.approval_hash);
            k.add_blob(m.ciphertext);
            k.ciphertexts_.push_back(m.ciphertext);
            k.add_blob(m.sig_server);
        }
        void operator()(const wire::ErrorMsg& m) {
            k.add_blob(m.request_hash);
            k.add_blob(m.sig_server);
        }
    };
    std::visit(Visitor{*this}, decoded.value());
}

void AttackerKnowledge::observe_transcript(const std::vector<TranscriptEntry>& transcript) {
    for (const auto& entry : transcript) observe_frame(entry.body);
}

void AttackerKnowledge::reveal_blob(ByteView data) {
    add_blob(data);
    if (data.size() == wire::kTokenBytes) {
        auto token = wire::decode_token(data);
        if (token.ok()) add_token_parts(token.value(), blobs_);
    }
}

void AttackerKnowledge::reveal_private_key(ByteView data) {
    add_blob(data);
    private_keys_.push_back(to_bytes(data));
}

bool AttackerKnowledge::knows_blob(ByteView data) const {
    return blobs_.count(to_bytes(data)) > 0;
}

bool AttackerKnowledge::can_derive_secret(const std::array<uint8_t, 32>& secret,
                                          std::string* witness) const {
    if (knows_blob(secret)) {
        if (witness) *witness = "secret bytes directly known";
        return true;
    }
    // A known finalized token decomposes into its payload. Tokens the
    // attacker learned whole were already decomposed in reveal_blob /
    // observe_frame, so this is covered by the direct check above. What
    // remains is the one destructor: decapsulate a known ciphertext with a
    // known decapsulation key.
    for (const Bytes& key : private_keys_) {
        for (const Bytes& ct : ciphertexts_) {
            auto derived = provider_.kem_decapsulate(ct, key);
            if (derived.ok() && derived.value().bytes == secret) {
                if (witness) *witness = "decapsulated a transcript ciphertext with a known key";
                return true;
            }
        }
    }
    return false;
}

bool AttackerKnowledge::can_sign_for(ByteView public_key) const {
    auto pk_id = crypto::symbolic::parse_public_key_id(public_key);
    if (!pk_id) return false;
    for (const Bytes& key : private_keys_) {
        auto seed = crypto::symbolic::parse_private_seed(key);
        if (seed && crypto::symbolic::key_id_from_dsa_seed(*seed) == *pk_id) return true;
    }
    return false;
}

SecrecyReport assert_secrecy(const std::vector<SessionSecret>& sessions,
                             const AttackerKnowledge& knowledge) {
    SecrecyReport report;
    for (size_t i = 0; i < sessions.size(); ++i) {
        std::string witness;
        if (knowledge.can_derive_secret(sessions[i].secret, &witness)) {
            report.all_secret = false;
            report.leaks.push_back({sessions[i].action_index, witness});
        }
    }
    return report;
}

}  // namespace pqm2m::harness
