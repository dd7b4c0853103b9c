#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "pqm2m/crypto/provider.hpp"
#include "pqm2m/net/channel.hpp"
#include "pqm2m/protocol/server_machines.hpp"
#include "pqm2m/store/clock.hpp"
#include "pqm2m/store/store.hpp"

namespace pqm2m::net {

struct ServerConfig {
    std::string host = "127.0.0.1";
    uint16_t port = 0;  // 0 picks an ephemeral port, see Server::port()
    int max_connections = 64;
    int idle_timeout_sec = 30;
    uint32_t max_frame_bytes = wire::kDefaultMaxFrameBytes;
    bool keep_alive = false;  // one protocol action per connection by default

    store::Timestamp key_lifetime = 90LL * 24 * 3600;
    store::Timestamp token_ttl = 3600;
    uint64_t time_max = std::numeric_limits<uint64_t>::max();
};

/// TCP front end: accepts connections and runs one driver per connection.
/// Drivers share only the store. Dispatch is by frame shape: a 74-byte body
/// is a token check; anything else is dispatched on its discriminator byte.
class Server {
public:
    Server(protocol::ServerIdentity identity, crypto::CryptoProvider& provider,
           store::ServerStore& store, const store::Clock& clock, ServerConfig config);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts accepting. Throws std::runtime_error on bind failure.
    void start();
    void stop();

    uint16_t port() const { return port_; }

private:
    void accept_loop();
    void serve_connection(int fd);

    protocol::ServerIdentity identity_;
    crypto::CryptoProvider& provider_;
    store::ServerStore& store_;
    const store::Clock& clock_;
    ServerConfig config_;

    int listen_fd_ = -1;
    uint16_t port_ = 0;
    std::thread accept_thread_;
    std::atomic<bool> running_{false};
    std::atomic<int> active_connections_{0};

    std::mutex conn_mu_;
    std::vector<int> open_fds_;
};

}  // namespace pqm2m::net
