#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sememe::data {

// Splits UTF-8 text into one string per Unicode scalar value. Throws
// DataError on malformed input.
std::vector<std::string> utf8_scalars(std::string_view text);

}  // namespace sememe::data
