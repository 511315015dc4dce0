#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace newstense {

// Replacement tags a token can carry. None means the token is plain text.
enum class TagKind : uint8_t {
  None = 0,
  Ticker,  // the asset the news item is mainly about
  Other,   // any other asset
  Num,     // plain numeral
  Perc,    // percentage numeral
  Date,    // date expression
  Name,    // person name
  Loc,     // location
  Abb,     // abbreviation
};

// "TICKER", "NUM", ... Empty string for None.
std::string_view tag_name(TagKind kind);
// Inverse of tag_name; returns None for anything unrecognized.
TagKind tag_from_name(std::string_view name);

struct Token {
  std::string text;       // surface form as it appears in the source
  uint32_t begin = 0;     // byte offsets into the source string
  uint32_t end = 0;
  TagKind kind = TagKind::None;
  bool referential = false;  // tag was inherited from an antecedent
  int32_t antecedent = -1;   // token index of that antecedent, else -1
};

// Half-open token index range [first, second).
using Span = std::pair<uint32_t, uint32_t>;

struct TaggedDocument {
  std::string original;
  std::vector<Token> tokens;
  // Filled in by Lingua::segment. Clause spans partition each sentence span.
  std::vector<Span> sentences;
  std::vector<Span> clauses;
};

// Splits text into word / numeral / punctuation tokens with byte offsets.
// Words keep internal apostrophes, hyphens and dotted-acronym periods.
// Numerals absorb decimal points, thousands separators, date separators,
// a trailing '%', and ordinal suffixes ("29th", "1990s").
// "@TICKER@"-style spans and bare uppercase tag names become tag tokens.
TaggedDocument tokenize(std::string_view text);

// Reconstructs the text with original spacing, substituting tag names for
// tagged tokens. Untagged input renders back to itself byte for byte.
std::string render(const TaggedDocument& doc);

// Token classification. "Word" and "numeral" imply the token is untagged.
bool is_word(const Token& t);
bool is_numeral(const Token& t);
bool is_punct(const Token& t);
bool is_sentence_end(const Token& t);  // . ! ? or ellipsis
bool is_capitalized(const Token& t);   // leading ASCII uppercase letter

std::string lower_ascii(std::string_view s);
// Latin-1 / Latin Extended-A letters to their ASCII base ("é" -> "e").
std::string fold_accents(std::string_view s);

}  // namespace newstense
