#pragma once

#include <functional>

#include "doctest.h"
#include "rnm/errors.hpp"

// Code of the rnm::Error thrown by f; fails the test if nothing is thrown.
inline rnm::ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const rnm::Error& e) {
        return e.code();
    }
    FAIL("expected an rnm::Error");
    return rnm::ErrorCode::InvariantViolation;
}
