#include "pqm2m/net/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace pqm2m::net {

namespace {

bool write_all(int fd, const uint8_t* data, size_t len) {
    size_t sent = 0;
    while (sent < len) {
        ssize_t n = ::send(fd, data + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        sent += static_cast<size_t>(n);
    }
    return true;
}

bool read_all(int fd, uint8_t* data, size_t len) {
    size_t got = 0;
    while (got < len) {
        ssize_t n = ::recv(fd, data + got, len - got, 0);
        if (n == 0) return false;
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        got += static_cast<size_t>(n);
    }
    return true;
}

}  // namespace

TcpChannel::TcpChannel(int fd, uint32_t max_frame_bytes, int recv_timeout_sec)
    : fd_(fd), max_frame_(max_frame_bytes) {
    if (recv_timeout_sec > 0) {
        timeval tv{recv_timeout_sec, 0};
        ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    }
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpChannel::~TcpChannel() { close(); }

void TcpChannel::close() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

bool TcpChannel::send_frame(ByteView body) {
    if (fd_ < 0 || body.size() > max_frame_) return false;
    uint8_t header[4];
    put_u32_be(header, static_cast<uint32_t>(body.size()));
    return write_all(fd_, header, 4) && write_all(fd_, body.data(), body.size());
}

std::optional<Bytes> TcpChannel::recv_frame() {
    if (fd_ < 0) return std::nullopt;
    uint8_t header[4];
    if (!read_all(fd_, header, 4)) return std::nullopt;
    uint32_t len = get_u32_be(header);
    if (len > max_frame_) {
        // Reject from the header alone; nothing of the body is buffered.
        close();
        return std::nullopt;
    }
    Bytes body(len);
    if (!read_all(fd_, body.data(), len)) return std::nullopt;
    return body;
}

Result<std::unique_ptr<TcpChannel>, ConnectError> tcp_connect(const std::string& host,
                                                              uint16_t port,
                                                              uint32_t max_frame_bytes,
                                                              int timeout_sec) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string port_str = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res);
    if (rc != 0) return ConnectError{std::string("resolve failed: ") + gai_strerror(rc)};

    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) return ConnectError{"connect failed: " + std::string(std::strerror(errno))};
    return std::make_unique<TcpChannel>(fd, max_frame_bytes, timeout_sec);
}

InMemoryChannel::InMemoryChannel(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out,
                                 uint32_t max_frame)
    : in_(std::move(in)), out_(std::move(out)), max_frame_(max_frame) {}

std::pair<std::unique_ptr<InMemoryChannel>, std::unique_ptr<InMemoryChannel>>
InMemoryChannel::make_pair(uint32_t max_frame_bytes) {
    auto a = std::make_shared<Queue>();
    auto b = std::make_shared<Queue>();
    auto left = std::unique_ptr<InMemoryChannel>(new InMemoryChannel(a, b, max_frame_bytes));
    auto right = std::unique_ptr<InMemoryChannel>(new InMemoryChannel(b, a, max_frame_bytes));
    return {std::move(left), std::move(right)};
}

bool InMemoryChannel::send_frame(ByteView body) {
    if (body.size() > max_frame_) return false;
    std::lock_guard lock(out_->mu);
    if (out_->closed) return false;
    out_->frames.emplace_back(body.begin(), body.end());
    out_->cv.notify_all();
    return true;
}

std::optional<Bytes> InMemoryChannel::recv_frame() {
    std::unique_lock lock(in_->mu);
    in_->cv.wait(lock, [&] { return !in_->frames.empty() || in_->closed; });
    if (in_->frames.empty()) return std::nullopt;
    Bytes body = std::move(in_->frames.front());
    in_->frames.pop_front();
    return body;
}

void InMemoryChannel::close() {
    for (auto& q : {in_, out_}) {
        std::lock_guard lock(q->mu);
        q->closed = true;
        q->cv.notify_all();
    }
}

}  // namespace pqm2m::net
