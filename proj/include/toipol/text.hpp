#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace toipol::text {

// ASCII lowercase; bytes >= 0x80 pass through untouched.
std::string lower(std::string_view s);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

// Splits on runs of ASCII whitespace, dropping empties.
std::vector<std::string> words(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace toipol::text
