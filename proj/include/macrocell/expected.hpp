// macrocell/expected.hpp - minimal value-or-error result type.
#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace macrocell {

// Either a T or an E. T and E must be distinct types.
template <typename T, typename E>
class Expected {
  public:
    Expected(T value) : value_(std::in_place_index<0>, std::move(value)) {}
    Expected(E error) : value_(std::in_place_index<1>, std::move(error)) {}

    bool ok() const { return value_.index() == 0; }
    explicit operator bool() const { return ok(); }

    T &value()
    {
        assert(ok());
        return std::get<0>(value_);
    }
    const T &value() const
    {
        assert(ok());
        return std::get<0>(value_);
    }
    const E &error() const
    {
        assert(!ok());
        return std::get<1>(value_);
    }

  private:
    std::variant<T, E> value_;
};

} // namespace macrocell
