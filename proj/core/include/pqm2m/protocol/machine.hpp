#pragma once

#include <deque>
#include <optional>
#include <variant>

#include "pqm2m/protocol/types.hpp"
#include "pqm2m/result.hpp"
#include "pqm2m/store/store.hpp"

namespace pqm2m::protocol {

// ---------------------------------------------------------------------------
// Work items a machine hands to its driver via poll_transmit, and the inputs
// a driver feeds back via recv. Protocol logic never touches sockets or the
// store directly; everything external is requested through these.
// ---------------------------------------------------------------------------

struct SendFrame {
    Bytes body;  // unframed message body; the driver adds the length prefix
};

namespace cmd {
struct GetAdmin {
    Uuid admin_uuid;
};
struct GetClient {
    Uuid uuid;
};
struct InsertClient {
    store::ClientRecord record;
};
struct RotateKey {
    Uuid uuid;
    Bytes new_key;
    store::Timestamp now;
};
struct AdvanceTimeCas {
    Uuid uuid;
    uint64_t observed;
};
struct InsertToken {
    store::TokenRecord record;
};
}  // namespace cmd

using StoreCommand = std::variant<cmd::GetAdmin, cmd::GetClient, cmd::InsertClient,
                                  cmd::RotateKey, cmd::AdvanceTimeCas, cmd::InsertToken>;

using WorkItem = std::variant<SendFrame, StoreCommand>;

namespace reply {
struct Admin {
    std::optional<store::AdminRecord> record;
};
struct Client {
    std::optional<store::ClientRecord> record;
};
struct ClientInserted {
    store::InsertClientResult result;
};
struct KeyRotated {
    store::RotateKeyResult result;
};
struct TimeCas {
    store::CasTimeResult result;
};
struct TokenInserted {
    store::InsertTokenResult result;
};
}  // namespace reply

using StoreReply = std::variant<reply::Admin, reply::Client, reply::ClientInserted,
                                reply::KeyRotated, reply::TimeCas, reply::TokenInserted>;

struct FrameIn {
    Bytes body;
};

using Input = std::variant<FrameIn, StoreReply>;

/// Executes a store command against a concrete store and wraps the result.
StoreReply execute(store::ServerStore& s, const StoreCommand& command);

// ---------------------------------------------------------------------------
// State machine base. One machine per protocol action per side; recv consumes
// an input and advances internal state, poll_transmit surfaces pending
// external work, poll_result stays pending until the machine terminates with
// exactly one success or one failure.
// ---------------------------------------------------------------------------

class StateMachine {
public:
    virtual ~StateMachine() = default;

    /// Feeds one input. Calling recv on a terminated machine is a driver bug
    /// and throws std::logic_error.
    void recv(Input input);

    /// Pops the next pending work item, if any.
    std::optional<WorkItem> poll_transmit();

    bool finished() const { return finished_; }

    /// Driver-side cancellation (connection reset, timeout). No effect if the
    /// machine already terminated.
    virtual void abort(Failure failure) = 0;

protected:
    virtual void on_input(Input&& input) = 0;

    void push_send(Bytes body) { outbox_.push_back(SendFrame{std::move(body)}); }
    void push_store(StoreCommand command) { outbox_.push_back(std::move(command)); }
    void mark_finished() { finished_ = true; }

private:
    std::deque<WorkItem> outbox_;
    bool finished_ = false;
};

/// Typed result holder: poll_result() is nullopt while the machine is still
/// pending and transitions to a Result exactly once.
template <typename T>
class Machine : public StateMachine {
public:
    using ResultType = Result<T, Failure>;

    const std::optional<ResultType>& poll_result() const { return result_; }

    void abort(Failure failure) override {
        if (!finished()) fail(std::move(failure));
    }

protected:
    void succeed(T value) {
        result_.emplace(std::move(value));
        mark_finished();
    }

    void fail(Failure failure) {
        result_.emplace(std::move(failure));
        mark_finished();
    }

private:
    std::optional<ResultType> result_;
};

}  // namespace pqm2m::protocol
