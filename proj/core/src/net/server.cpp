#include "pqm2m/net/server.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <stdexcept>

#include "pqm2m/net/driver.hpp"
#include "pqm2m/protocol/check.hpp"

namespace pqm2m::net {

namespace {

std::unique_ptr<protocol::StateMachine> dispatch(uint8_t discriminator,
                                                 const protocol::ServerIdentity& identity,
                                                 crypto::CryptoProvider& provider,
                                                 const protocol::ServerPolicy& policy) {
    using wire::MsgType;
    switch (static_cast<MsgType>(discriminator)) {
        case MsgType::register_client:
            return std::make_unique<protocol::RegisterServerMachine>(identity, provider, policy);
        case MsgType::cycle:
            return std::make_unique<protocol::CycleServerMachine>(identity, provider, policy);
        case MsgType::stamp:
            return std::make_unique<protocol::StampServerMachine>(identity, provider, policy);
        default:
            return nullptr;
    }
}

}  // namespace

Server::Server(protocol::ServerIdentity identity, crypto::CryptoProvider& provider,
               store::ServerStore& store, const store::Clock& clock, ServerConfig config)
    : identity_(std::move(identity)),
      provider_(provider),
      store_(store),
      clock_(clock),
      config_(std::move(config)) {}

Server::~Server() { stop(); }

void Server::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(config_.port);
    if (::inet_pton(AF_INET, config_.host.c_str(), &addr.sin_addr) != 1) {
        throw std::runtime_error("invalid listen address: " + config_.host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw std::runtime_error("bind failed: " + std::string(std::strerror(errno)));
    }
    if (::listen(listen_fd_, 128) != 0) {
        throw std::runtime_error("listen failed");
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
    if (!running_.exchange(false)) return;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    {
        std::lock_guard lock(conn_mu_);
        for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    while (active_connections_.load() > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

void Server::accept_loop() {
    std::vector<std::thread> workers;
    while (running_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        if (active_connections_.load() >= config_.max_connections) {
            ::close(fd);
            continue;
        }
        active_connections_.fetch_add(1);
        {
            std::lock_guard lock(conn_mu_);
            open_fds_.push_back(fd);
        }
        workers.emplace_back([this, fd] {
            serve_connection(fd);
            {
                std::lock_guard lock(conn_mu_);
                open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd),
                                open_fds_.end());
            }
            active_connections_.fetch_sub(1);
        });
    }
    for (auto& w : workers) {
        if (w.joinable()) w.join();
    }
}

void Server::serve_connection(int fd) {
    TcpChannel channel(fd, config_.max_frame_bytes, config_.idle_timeout_sec);
    do {
        auto body = channel.recv_frame();
        if (!body) return;

        if (body->size() == wire::kTokenBytes) {
            auto result =
                protocol::server_check_token(*body, provider_, store_, clock_.now());
            if (!channel.send_frame(protocol::encode_check_reply(result))) return;
            continue;
        }
        if (body->empty()) return;

        protocol::ServerPolicy policy;
        policy.now = clock_.now();
        policy.key_lifetime = config_.key_lifetime;
        policy.token_ttl = config_.token_ttl;
        policy.time_max = config_.time_max;

        auto machine = dispatch((*body)[0], identity_, provider_, policy);
        if (!machine) return;  // not a client-initiated message; drop the link
        machine->recv(protocol::FrameIn{std::move(*body)});
        drive(*machine, channel, &store_);
    } while (config_.keep_alive && running_);
}

}  // namespace pqm2m::net
