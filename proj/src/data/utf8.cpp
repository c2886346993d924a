#include "sememe/data/utf8.hpp"

#include <cstdint>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::data {

std::vector<std::string> utf8_scalars(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<std::uint8_t>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (lead < 0x80) {
      len = 1;
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
      cp = lead & 0x07;
    } else {
      throw DataError(fmt::format("invalid UTF-8 lead byte 0x{:02x} at offset {}", lead, i));
    }
    if (i + len > text.size()) throw DataError(fmt::format("truncated UTF-8 sequence at offset {}", i));
    for (std::size_t j = 1; j < len; ++j) {
      const auto cont = static_cast<std::uint8_t>(text[i + j]);
      if ((cont & 0xC0) != 0x80) throw DataError(fmt::format("invalid UTF-8 continuation byte at offset {}", i + j));
      cp = (cp << 6) | (cont & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw DataError(fmt::format("invalid UTF-8 scalar at offset {}", i));
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace sememe::data
