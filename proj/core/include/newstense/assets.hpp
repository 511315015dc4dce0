#pragma once

#include <string>
#include <string_view>

#include "newstense/lexicon.hpp"
#include "newstense/text.hpp"

namespace newstense {

struct AssetTagStats {
  int ticker = 0;
  int other = 0;
};

// Tags asset mentions in place. Every occurrence of main_ticker (matched
// case-insensitively, possessives stripped, multi-word names supported)
// becomes TICKER; any other match against the asset lexicon becomes OTHER.
// Matches require at least one uppercase letter in the source token, so
// common words that double as asset names ("target") stay untouched in
// lowercase positions.
AssetTagStats tag_assets(TaggedDocument& doc, const LexiconSet& lex,
                         std::string_view main_ticker);

// Resolves referential nouns ("the stock", "the company") to the nearest
// preceding TICKER/OTHER tag in the same or the previous sentence; the noun
// inherits that tag, keeps its determiner, and records the antecedent token
// index. Returns the number of nouns resolved.
int resolve_referential(TaggedDocument& doc, const LexiconSet& lex);

}  // namespace newstense
