#pragma once

#include <functional>

#include "doctest.h"

#include "fbp/error.hpp"

// Runs fn and checks that it throws fbp::Error with the given code.
inline void require_code(fbp::ErrorCode code, const std::function<void()>& fn) {
  bool thrown = false;
  try {
    fn();
  } catch (const fbp::Error& e) {
    thrown = true;
    CHECK_MESSAGE(e.code() == code, e.what());
  }
  CHECK_MESSAGE(thrown, "expected ", fbp::to_string(code));
}
