#pragma once

#include <gtest/gtest.h>

#include "approach/error.hpp"

namespace support {

/// Runs f and returns the code of the approach::Error it throws.
template <typename F>
approach::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const approach::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return approach::ErrorCode::kInvalidArgument;
}

}  // namespace support
