#include "pqm2m/wire/frame.hpp"

namespace pqm2m::wire {

Bytes frame(ByteView body) {
    Bytes out(4 + body.size());
    put_u32_be(out.data(), static_cast<uint32_t>(body.size()));
    std::copy(body.begin(), body.end(), out.begin() + 4);
    return out;
}

bool FrameReader::feed(ByteView data) {
    if (oversized_) return false;
    buffer_.insert(buffer_.end(), data.begin(), data.end());
    while (buffer_.size() >= 4) {
        uint32_t len = get_u32_be(buffer_.data());
        if (len > max_body_) {
            oversized_ = true;
            buffer_.clear();
            return false;
        }
        if (buffer_.size() < 4 + static_cast<size_t>(len)) break;
        ready_.emplace_back(buffer_.begin() + 4, buffer_.begin() + 4 + len);
        buffer_.erase(buffer_.begin(), buffer_.begin() + 4 + len);
    }
    return true;
}

std::optional<Bytes> FrameReader::next() {
    if (ready_.empty()) return std::nullopt;
    Bytes out = std::move(ready_.front());
    ready_.pop_front();
    return out;
}

}  // namespace pqm2m::wire
