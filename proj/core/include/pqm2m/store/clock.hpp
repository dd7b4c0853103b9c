#pragma once

#include <atomic>
#include <cstdint>

namespace pqm2m::store {

/// Wall-clock seconds since the Unix epoch. Injected so tests control expiry.
using Timestamp = int64_t;

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override;
};

class ManualClock final : public Clock {
public:
    explicit ManualClock(Timestamp start = 0) : now_(start) {}
    Timestamp now() const override { return now_.load(); }
    void set(Timestamp t) { now_.store(t); }
    void advance(Timestamp delta) { now_.fetch_add(delta); }

private:
    std::atomic<Timestamp> now_;
};

}  // namespace pqm2m::store
