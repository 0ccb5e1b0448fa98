#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <gtest/gtest.h>

#include "lfc/error.hpp"

namespace testutil {

// Runs fn and checks it throws lfc::Error of the given kind whose message
// contains `needle`.
inline ::testing::AssertionResult throwsError(const std::function<void()>& fn,
                                              lfc::ErrorKind kind, const std::string& needle = "") {
  try {
    fn();
  } catch (const lfc::Error& e) {
    if (e.kind() != kind) {
      return ::testing::AssertionFailure() << "wrong kind for: " << e.what();
    }
    if (std::string(e.what()).find(needle) == std::string::npos) {
      return ::testing::AssertionFailure() << "message lacks '" << needle << "': " << e.what();
    }
    return ::testing::AssertionSuccess();
  }
  return ::testing::AssertionFailure() << "no lfc::Error thrown";
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratchDir(const std::string& name) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() / "lfc4_tests" /
             (std::string(info->test_suite_name()) + "." + info->name() + "." + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
