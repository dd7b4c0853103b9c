#include "pqm2m/protocol/machine.hpp"

#include <stdexcept>

namespace pqm2m::protocol {

void StateMachine::recv(Input input) {
    if (finished_) {
        throw std::logic_error("recv on a terminated state machine");
    }
    on_input(std::move(input));
}

std::optional<WorkItem> StateMachine::poll_transmit() {
    if (outbox_.empty()) return std::nullopt;
    WorkItem item = std::move(outbox_.front());
    outbox_.pop_front();
    return item;
}

StoreReply execute(store::ServerStore& s, const StoreCommand& command) {
    struct Visitor {
        store::ServerStore& store;

        StoreReply operator()(const cmd::GetAdmin& c) {
            return reply::Admin{store.get_admin(c.admin_uuid)};
        }
        StoreReply operator()(const cmd::GetClient& c) {
            return reply::Client{store.get_client(c.uuid)};
        }
        StoreReply operator()(const cmd::InsertClient& c) {
            return reply::ClientInserted{store.insert_client(c.record)};
        }
        StoreReply operator()(const cmd::RotateKey& c) {
            return reply::KeyRotated{store.rotate_key(c.uuid, c.new_key, c.now)};
        }
        StoreReply operator()(const cmd::AdvanceTimeCas& c) {
            return reply::TimeCas{store.compare_and_advance_time(c.uuid, c.observed)};
        }
        StoreReply operator()(const cmd::InsertToken& c) {
            return reply::TokenInserted{store.insert_token(c.record)};
        }
    };
    return std::visit(Visitor{s}, command);
}

const char* failure_kind_name(FailureKind kind) {
    switch (kind) {
        case FailureKind::bad_signature: return "bad_signature";
        case FailureKind::hash_mismatch: return "hash_mismatch";
        case FailureKind::bad_message: return "bad_message";
        case FailureKind::invalid_perms: return "invalid_perms";
        case FailureKind::server_error: return "server_error";
        case FailureKind::cycle_required: return "cycle_required";
        case FailureKind::time_resync: return "time_resync";
        case FailureKind::rejected: return "rejected";
        case FailureKind::crypto_failure: return "crypto_failure";
        case FailureKind::store_failure: return "store_failure";
        case FailureKind::transport: return "transport";
    }
    return "?";
}

}  // namespace pqm2m::protocol
