#pragma once

#include <functional>

#include <gtest/gtest.h>

#include "chromdev/error.hpp"

// Passes when fn throws chromdev::Error with the given code.
inline ::testing::AssertionResult throws_code(const std::function<void()>& fn,
                                              chromdev::Errc code) {
  try {
    fn();
  } catch (const chromdev::Error& e) {
    if (e.code() == code) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "wrong code: " << e.what();
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "foreign exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "nothing thrown";
}
