#pragma once
// SHA-1 (RFC 3174). Used as the 160-bit content digest behind entry ids.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace chronorg {

std::array<std::uint8_t, 20> sha1(std::string_view data);
std::string sha1_hex(std::string_view data);

} // namespace chronorg
