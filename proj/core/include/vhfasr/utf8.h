// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_UTF8_H_
#define VHFASR_UTF8_H_

#include <string>
#include <string_view>

namespace vhfasr::utf8 {

// Malformed bytes decode to U+FFFD.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

}  // namespace vhfasr::utf8

#endif  // VHFASR_UTF8_H_
