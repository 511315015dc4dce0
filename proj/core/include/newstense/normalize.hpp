#pragma once

#include <string>
#include <vector>

#include "newstense/lexicon.hpp"
#include "newstense/text.hpp"

namespace newstense {

struct NormalizeStats {
  int num = 0;
  int perc = 0;
  int date = 0;
  // Convention call-outs worth surfacing to the user, e.g. that percentage
  // numerals get their own PERC tag instead of folding into NUM.
  std::vector<std::string> notes;
};

// Replaces numeric expressions with tags, in place:
//   - numerals with a '%' suffix or followed by "percent"/"pct"  -> PERC
//   - month-name + day/year patterns, slash/dash digit dates,
//     standalone years 1900-2099 (and decades like "1990s")      -> DATE
//   - any remaining digit-led numeral                            -> NUM
// Spelled-out numbers ("three") are left alone. Merged spans keep the
// byte offsets of the full original expression.
NormalizeStats normalize_numerics(TaggedDocument& doc);

// Tags person names (NAME), cities (LOC) and abbreviations (ABB) using the
// gazetteers. Names: a capitalized token whose base form is in the surname
// list and not finance vocabulary; a capitalized token directly before a
// confirmed name is pulled into the tag, and adjacent name tokens collapse
// into one tag. Tokens following a name are never promoted.
void tag_entities(TaggedDocument& doc, const LexiconSet& lex);

// Flattens a tagged document into the lowercase text the n-gram vectorizers
// consume: punctuation dropped, tags kept uppercase, words accent-folded
// with in-word joiners removed, single spaces between tokens.
std::string scrub_for_ngrams(const TaggedDocument& doc);

}  // namespace newstense
