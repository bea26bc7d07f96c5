#pragma once

#include <gtest/gtest.h>

#include <string>

#include "gridstealth/error.hpp"

#define EXPECT_GRIDSTEALTH_ERROR(statement, expected_kind)                      \
  do {                                                                          \
    try {                                                                       \
      statement;                                                                \
      ADD_FAILURE() << "expected " << gridstealth::label(expected_kind);        \
    } catch (const gridstealth::Error& e) {                                     \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                           \
    }                                                                           \
  } while (0)

inline std::string data_path(const std::string& name) {
  return std::string(GRIDSTEALTH_DATA_DIR) + "/" + name;
}
