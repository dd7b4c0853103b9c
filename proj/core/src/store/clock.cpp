#include "pqm2m/store/clock.hpp"

#include <chrono>

namespace pqm2m::store {

Timestamp SystemClock::now() const {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace pqm2m::store
