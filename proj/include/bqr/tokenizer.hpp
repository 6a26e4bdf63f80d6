#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bqr {

// Shared tokenizer for indexing, bag-of-words vectors and embedding lookups.
// Splits on every byte that is not an ASCII letter or digit, lowercases ASCII.
// Bytes >= 0x80 are kept inside tokens so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = true);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

}  // namespace bqr
