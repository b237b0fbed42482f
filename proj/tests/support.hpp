#pragma once

#include <optional>
#include <random>

#include "thurston/error.hpp"

// The code of the Error thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<thurston::Errc> thrown_code(F&& f) {
    try {
        f();
    } catch (const thurston::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

#define REQUIRE_THROWS_CODE(expr, errc) REQUIRE(thrown_code([&] { (void)(expr); }) == std::optional(errc))
