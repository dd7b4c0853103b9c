#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace pqm2m {

/// Minimal expected-style result. Holds either a value or an error; accessing
/// the wrong alternative throws std::logic_error.
template <typename T, typename E>
class Result {
public:
    Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
    Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        if (!ok()) throw std::logic_error("Result: value() on error");
        return std::get<0>(v_);
    }
    T& value() & {
        if (!ok()) throw std::logic_error("Result: value() on error");
        return std::get<0>(v_);
    }
    T&& value() && {
        if (!ok()) throw std::logic_error("Result: value() on error");
        return std::get<0>(std::move(v_));
    }

    const E& error() const& {
        if (ok()) throw std::logic_error("Result: error() on value");
        return std::get<1>(v_);
    }
    E& error() & {
        if (ok()) throw std::logic_error("Result: error() on value");
        return std::get<1>(v_);
    }

private:
    std::variant<T, E> v_;
};

}  // namespace pqm2m
