#include "sememe/common/error.hpp"

namespace sememe {

ExitCode exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UsageError*>(&e) != nullptr) return ExitCode::kUsage;
  if (dynamic_cast<const DataError*>(&e) != nullptr) return ExitCode::kData;
  if (dynamic_cast<const NumericError*>(&e) != nullptr) return ExitCode::kNumeric;
  if (dynamic_cast<const ShapeError*>(&e) != nullptr) return ExitCode::kNumeric;
  return ExitCode::kData;
}

}  // namespace sememe
