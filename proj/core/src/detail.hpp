#pragma once

// Helpers shared between the tagging passes. Internal to the library.

#include <string>
#include <string_view>

#include "newstense/text.hpp"

namespace newstense::detail {

// Folded, lowercased, possessive-stripped comparison form of a word token.
std::string word_base(const Token& t);

bool has_upper(std::string_view s);

// Replaces tokens [first, last] (inclusive) with one tagged token covering
// their combined source span.
void merge_tokens(TaggedDocument& doc, size_t first, size_t last, TagKind kind);

}  // namespace newstense::detail
