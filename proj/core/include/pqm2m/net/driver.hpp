#pragma once

#include "pqm2m/net/channel.hpp"
#include "pqm2m/protocol/machine.hpp"

namespace pqm2m::net {

/// Drives a state machine to completion: pending work from poll_transmit is
/// serviced (frames onto the channel, store commands against the store, with
/// results fed back through recv), and when the machine is idle the driver
/// blocks on the channel for the next inbound frame. Connection failures
/// abort the machine with a transport failure.
///
/// `store` may be null for client-side machines, which never issue store
/// commands.
void drive(protocol::StateMachine& machine, ByteChannel& channel, store::ServerStore* store);

}  // namespace pqm2m::net
