#pragma once

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>

#include "pqm2m/bytes.hpp"
#include "pqm2m/result.hpp"
#include "pqm2m/wire/frame.hpp"

namespace pqm2m::net {

/// Framed byte transport as seen by a driver: whole frame bodies in, whole
/// frame bodies out. Nothing protocol-specific lives here.
class ByteChannel {
public:
    virtual ~ByteChannel() = default;

    /// Sends one frame; false on transport failure.
    virtual bool send_frame(ByteView body) = 0;

    /// Blocks for the next whole frame body. nullopt on EOF, timeout, error,
    /// or an oversized frame (after which the channel is unusable).
    virtual std::optional<Bytes> recv_frame() = 0;

    virtual void close() = 0;
};

/// Connected TCP socket with u32 big-endian length framing.
class TcpChannel final : public ByteChannel {
public:
    TcpChannel(int fd, uint32_t max_frame_bytes, int recv_timeout_sec);
    ~TcpChannel() override;

    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;

    bool send_frame(ByteView body) override;
    std::optional<Bytes> recv_frame() override;
    void close() override;

    int fd() const { return fd_; }

private:
    int fd_;
    uint32_t max_frame_;
};

struct ConnectError {
    std::string detail;
};

Result<std::unique_ptr<TcpChannel>, ConnectError> tcp_connect(
    const std::string& host, uint16_t port, uint32_t max_frame_bytes = wire::kDefaultMaxFrameBytes,
    int timeout_sec = 10);

/// One end of an in-process duplex pipe; the other end is its peer. Used by
/// tests to run the exact driver code paths without sockets.
class InMemoryChannel final : public ByteChannel {
public:
    static std::pair<std::unique_ptr<InMemoryChannel>, std::unique_ptr<InMemoryChannel>> make_pair(
        uint32_t max_frame_bytes = wire::kDefaultMaxFrameBytes);

    bool send_frame(ByteView body) override;
    std::optional<Bytes> recv_frame() override;
    void close() override;

private:
    struct Queue {
        std::mutex mu;
        std::condition_variable cv;
        std::deque<Bytes> frames;
        bool closed = false;
    };

    InMemoryChannel(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out, uint32_t max_frame);

    std::shared_ptr<Queue> in_;
    std::shared_ptr<Queue> out_;
    uint32_t max_frame_;
};

}  // namespace pqm2m::net
