#include "pqm2m/net/driver.hpp"

namespace pqm2m::net {

void drive(protocol::StateMachine& machine, ByteChannel& channel, store::ServerStore* store) {
    using namespace protocol;
    for (;;) {
        // Machines commonly queue their final reply and terminate in the same
        // step, so pending work is flushed before the finished check.
        if (auto work = machine.poll_transmit()) {
            if (auto* frame = std::get_if<SendFrame>(&*work)) {
                if (!channel.send_frame(frame->body)) {
                    machine.abort({FailureKind::transport, "send failed"});
                    return;
                }
            } else if (!machine.finished()) {
                auto& command = std::get<StoreCommand>(*work);
                if (!store) {
                    machine.abort({FailureKind::store_failure, "no store bound to driver"});
                    return;
                }
                machine.recv(execute(*store, command));
            }
            continue;
        }
        if (machine.finished()) return;
        auto body = channel.recv_frame();
        if (!body) {
            machine.abort({FailureKind::transport, "connection closed"});
            return;
        }
        machine.recv(FrameIn{std::move(*body)});
    }
}

}  // namespace pqm2m::net
