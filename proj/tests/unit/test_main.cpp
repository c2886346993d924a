#include <gtest/gtest.h>

#include "sememe/nd/tape.hpp"

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  sememe::nd::set_default_checked(true);
  return RUN_ALL_TESTS();
}
